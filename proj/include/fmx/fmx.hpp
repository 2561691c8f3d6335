#pragma once

#include "fmx/analytic.hpp"
#include "fmx/diagnostics.hpp"
#include "fmx/errors.hpp"
#include "fmx/field.hpp"
#include "fmx/grid.hpp"
#include "fmx/propagator.hpp"
#include "fmx/runner.hpp"
#include "fmx/spectral.hpp"
