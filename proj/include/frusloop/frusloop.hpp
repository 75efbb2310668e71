#pragma once

#include "frusloop/analyze.hpp"
#include "frusloop/bench.hpp"
#include "frusloop/convert.hpp"
#include "frusloop/core.hpp"
#include "frusloop/error.hpp"
#include "frusloop/generate.hpp"
#include "frusloop/io.hpp"
#include "frusloop/matrix.hpp"
#include "frusloop/rng.hpp"
#include "frusloop/solve.hpp"
#include "frusloop/special.hpp"
#include "frusloop/version.hpp"
