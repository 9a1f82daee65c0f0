#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "detwork/rational.hpp"
#include "detwork/spectrum.hpp"
#include "detwork/state.hpp"

namespace detwork {

struct LcmPlan {
  BigInt M_S;                         // lcm of the occupied lattice indices
  std::map<std::size_t, BigInt> K;    // per occupied level
  BigInt K_S;
  Rational e_frak;                    // (sum over occupied levels of occupied_i / energy_i)^-1
};

/// Throws NotApplicable when the ground is occupied.
LcmPlan lcm_plan(const LatticeSpectrum& ls);

struct LowerBounds {
  Rational lcm_lower;
  std::optional<Rational> harmonic_lower;  // only when every occupied dim is 1
  std::optional<Rational> finite_n_lower;  // only when n was given
};

/// Throws NotApplicable when the ground is occupied, InvalidArgument for n < 1.
LowerBounds lower_bounds(const LatticeSpectrum& ls, std::optional<int> n = std::nullopt);

/// Harmonic lower bound; throws NotApplicable when some occupied dim exceeds 1.
Rational harmonic_lower_bound(const LatticeSpectrum& ls);

/// Mean energy minus passive energy for a state that spreads each level's
/// probability evenly over its occupied sublevels.
Rational ergotropy_diagonal(const std::map<std::size_t, Rational>& level_pops, const Spectrum& s);

/// Single-copy thermal state restricted to the occupied sublevels.
DiagonalState<double> gibbs_filtered_state(const Spectrum& s, double beta);

struct ThermoPoint {
  double Z = 0;
  double log_Z = 0;
  double energy = 0;
  double entropy = 0;
};

/// Partition function, mean energy and entropy S = beta*E + ln Z of the full
/// (filtered = false) or support-restricted (filtered = true) thermal state.
/// Evaluated with the lowest included energy factored out, so large beta is safe.
ThermoPoint thermo_curves(const Spectrum& s, double beta, bool filtered);

struct BetaRoot {
  double beta = 0;
  double residual = 0;  // S_filtered - S_full at beta
  double gap = 0;       // E_filtered - E_full at beta
};

/// All bracketed sign changes of S_filtered - S_full on the scan grid,
/// refined by bisection.
std::vector<BetaRoot> entropy_crossings(const Spectrum& s);

/// The crossing with the smallest energy gap. Throws FullSupport when the
/// support is the whole space, NoSignChange when the grid shows no crossing.
BetaRoot solve_beta_star(const Spectrum& s);

struct ErgotropyBound {
  double value = 0;
  std::optional<BetaRoot> root;  // the minimizing crossing, if one beat the limit
  double limit_value = 0;        // large-beta limit
  std::string note;
};

/// min over beta of E_filtered(beta) - E_full(beta), evaluated at the entropy
/// crossings and in the large-beta limit. 0 for full support.
ErgotropyBound ergotropy_bound_report(const Spectrum& s);
double ergotropy_upper_bound(const Spectrum& s);

struct SpectrumMoments {
  double mu0 = 0, sigma0_sq = 0;
  double mu_plus = 0, sigma_plus_sq = 0;
  double dim_full = 0, dim_occupied = 0;
};

/// Basis-state weighted energy moments of the full space and the support.
SpectrumMoments spectrum_moments(const Spectrum& s);

struct CltEstimate {
  double value = 0;
  SpectrumMoments moments;
  std::string note;
};

/// mu_plus - mu0 + sqrt(2 (sigma0^2 - sigma_plus^2) ln(d / d_occupied)).
/// Full support gives 0 with a note; otherwise throws NotApplicable when
/// sigma0^2 <= sigma_plus^2.
CltEstimate clt_estimate(const Spectrum& s);

enum class Which { full, occupied };

/// Gaussian approximation (d^n/n) sqrt(n/(2 pi sigma^2)) exp(-n (x-mu)^2 / (2 sigma^2))
/// of the shell count at total energy n*x.
double gaussian_shell_density(const Spectrum& s, int n, double x, Which which);

struct BoundsReport {
  Rational eps_min_bound;
  ErgotropyBound ergotropy;
  std::optional<LcmPlan> lcm;
  std::optional<LowerBounds> lower;
  std::optional<CltEstimate> clt;
  std::string clt_note;
  bool degenerate_support = false;  // some occupied dim above 1
};

BoundsReport bounds_report(const Spectrum& s, std::optional<int> n = std::nullopt);

}  // namespace detwork
