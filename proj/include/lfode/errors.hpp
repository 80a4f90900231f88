#pragma once

#include <stdexcept>
#include <string>

namespace lfode {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// jet arithmetic
struct BaseMismatch : Error { using Error::Error; };
struct OrderMismatch : Error { using Error::Error; };
struct DivisionBySingular : Error { using Error::Error; };
struct BasePointMismatch : Error { using Error::Error; };
struct NonInvertibleJet : Error { using Error::Error; };
struct NonPositiveConstantTerm : Error { using Error::Error; };

// operators and reductions
struct OrderTooLow : Error { using Error::Error; };
struct SingularLeadingCoefficient : Error { using Error::Error; };
struct NotInReducedForm : Error { using Error::Error; };
struct NotInLFForm : Error { using Error::Error; };

// projective maps
struct DegenerateMap : Error { using Error::Error; };
struct PoleAtBasePoint : Error { using Error::Error; };

// germ classification
struct ClassMismatch : Error { using Error::Error; };
struct NotRegularGerm : Error { using Error::Error; };
struct NormalizationDiverged : Error { using Error::Error; };

// .lode document handling
struct ParseError : Error {
  int line = 0;
  ParseError(int line_no, const std::string& what)
      : Error("line " + std::to_string(line_no) + ": " + what), line(line_no) {}
  explicit ParseError(const std::string& what) : Error(what) {}
};
struct DuplicateKey : ParseError { using ParseError::ParseError; };
struct MissingLeadingCoefficient : Error { using Error::Error; };

}  // namespace lfode
