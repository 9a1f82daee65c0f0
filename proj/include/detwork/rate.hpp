#pragma once

#include <cstdint>
#include <vector>

#include "detwork/rational.hpp"
#include "detwork/shellcount.hpp"
#include "detwork/spectrum.hpp"

namespace detwork {

struct RateResult {
  int n = 0;
  std::int64_t shift = 0;  // lattice units
  Rational work_total;
  Rational rate;
};

/// True when every occupied shell t fits into the full shell t - shift.
bool shift_feasible(const ShellCounts& occupied, const ShellCounts& full, std::int64_t shift);

/// Largest shift s >= 0 with occupied(t) <= full(t - s) for every occupied shell t.
std::int64_t max_det_shift(const LatticeSpectrum& ls, int n);

RateResult rate_n(const Spectrum& s, int n);

std::vector<RateResult> rate_sweep(const Spectrum& s, int n_from, int n_to);

inline constexpr std::uint64_t kDefaultBruteForceLimit = 100'000;

/// Independent check of rate_n: enumerates basis strings with exact energies
/// and tests every candidate work value by direct counting.
RateResult brute_force_mdew(const Spectrum& s, int n, std::uint64_t max_strings = kDefaultBruteForceLimit);

/// Rate of the two-level model with a d1-fold excited level of which delta1
/// sublevels are populated, in units of the excited energy:
/// max{k/n : C(n,k) d1^n >= d1^k delta1^n}.
Rational binomial_rate_2level(int d1, int delta1, int n);

}  // namespace detwork
