#pragma once

#include "arith.hpp"
#include "constants.hpp"
#include "latticecount.hpp"
#include "multdep.hpp"
#include "rational.hpp"
#include "report.hpp"
#include "slicevol.hpp"
