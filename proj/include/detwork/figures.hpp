#pragma once

#include "detwork/io.hpp"
#include "detwork/rational.hpp"
#include "detwork/spectrum.hpp"

namespace detwork {

/// Rates at fixed n for the model (0, 1, eps2) with the two excited levels
/// populated, eps2 on the grid from..to in steps of `step`.
/// Columns: eps2, rate, rate_decimal, upper_bound, clt, floor_lower.
Table figure_r100(const Rational& eps2_from, const Rational& eps2_to, const Rational& step, int n);

/// Columns: n, rate, rate_decimal, lcm_lower, upper_bound, clt.
Table figure_rates_vs_n(const Spectrum& s, int n_max);

/// Exact shell counts against their Gaussian estimates, per total energy.
/// Columns: t, x, exact_full, gaussian_full, exact_occupied, gaussian_occupied.
Table figure_gaussians(const Spectrum& s, int n);

}  // namespace detwork
