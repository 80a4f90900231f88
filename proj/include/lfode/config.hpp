#pragma once

#include <stdexcept>

namespace lfode {

inline constexpr int kDefaultOrder = 12;
inline constexpr double kDefaultTol = 1e-9;
inline constexpr double kDefaultRegTol = 1e-6;
inline constexpr double kDefaultRankTol = 1e-8;

/// Numeric policy shared by the whole pipeline.
///
/// `tol` decides when a jet coefficient counts as zero, `reg_tol` decides
/// when a value at the base point counts as nonvanishing, `rank_tol` is the
/// pivot threshold for the symmetry rank computation.
struct Config {
  int order = kDefaultOrder;  // jet truncation order K
  double tol = kDefaultTol;
  double reg_tol = kDefaultRegTol;
  double rank_tol = kDefaultRankTol;

  void validate() const {
    if (order < 4) throw std::invalid_argument("Config: order must be >= 4");
    if (!(0.0 < tol && tol < reg_tol && reg_tol < 1.0))
      throw std::invalid_argument("Config: need 0 < tol < reg_tol < 1");
    if (!(rank_tol > 0.0 && rank_tol < 1.0))
      throw std::invalid_argument("Config: need 0 < rank_tol < 1");
  }
};

}  // namespace lfode
