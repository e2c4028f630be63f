#pragma once

#include "dioph/approx_functions.hpp"
#include "dioph/best_approx.hpp"
#include "dioph/errors.hpp"
#include "dioph/khintchine.hpp"
#include "dioph/linalg.hpp"
#include "dioph/metric_lab.hpp"
#include "dioph/report.hpp"
#include "dioph/rng.hpp"
#include "dioph/scalar.hpp"
#include "dioph/serialize.hpp"
#include "dioph/transference.hpp"
