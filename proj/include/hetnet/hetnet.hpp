#pragma once

#include "hetnet/analytic.hpp"
#include "hetnet/errors.hpp"
#include "hetnet/model.hpp"
#include "hetnet/quadrature.hpp"
#include "hetnet/report.hpp"
#include "hetnet/rng.hpp"
#include "hetnet/scenario.hpp"
#include "hetnet/simulate.hpp"
#include "hetnet/special_fn.hpp"
