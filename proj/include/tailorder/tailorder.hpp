#pragma once

// Convenience header pulling in the whole library.

#include "tailorder/error.hpp"
#include "tailorder/extended_real.hpp"
#include "tailorder/level.hpp"
#include "tailorder/distortion.hpp"
#include "tailorder/quadrature.hpp"
#include "tailorder/distribution.hpp"
#include "tailorder/risk_measures.hpp"
#include "tailorder/empirical.hpp"
#include "tailorder/monte_carlo.hpp"
#include "tailorder/order_analysis.hpp"
#include "tailorder/spec_io.hpp"
#include "tailorder/csv.hpp"
