#pragma once

#include "lfode/config.hpp"
#include "lfode/dual.hpp"
#include "lfode/errors.hpp"
#include "lfode/germ.hpp"
#include "lfode/jet.hpp"
#include "lfode/lode.hpp"
#include "lfode/mobius.hpp"
#include "lfode/normalform.hpp"
#include "lfode/operator.hpp"
#include "lfode/projaction.hpp"
