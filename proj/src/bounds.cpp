#include "detwork/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "detwork/errors.hpp"

namespace detwork {

LcmPlan lcm_plan(const LatticeSpectrum& ls) {
  validate_lattice(ls);
  if (ls.m.front() != 0) throw NotApplicable("lcm plan needs the ground at lattice index 0");
  if (ls.occupied.front() > 0) throw NotApplicable("lcm plan needs an unoccupied ground level");
  LcmPlan p;
  p.M_S = 1;
  const auto occ = ls.occupied_levels();
  for (auto i : occ) {
    BigInt m = static_cast<long>(ls.m[i]);
    mpz_lcm(p.M_S.get_mpz_t(), p.M_S.get_mpz_t(), m.get_mpz_t());
  }
  p.K_S = 0;
  Rational inv = 0;
  for (auto i : occ) {
    BigInt K = p.M_S / BigInt(static_cast<long>(ls.m[i])) + ls.occupied[i] - 1;
    p.K_S += ls.occupied[i] * (K - 1);
    p.K[i] = K;
    inv += Rational(ls.occupied[i]) / ls.energy(i);
  }
  p.e_frak = 1 / inv;
  return p;
}

Rational harmonic_lower_bound(const LatticeSpectrum& ls) {
  validate_lattice(ls);
  if (ls.occupied.front() > 0) throw NotApplicable("harmonic bound needs an unoccupied ground level");
  Rational inv = 0;
  for (auto i : ls.occupied_levels()) {
    if (ls.occupied[i] != 1) throw NotApplicable("harmonic bound needs occupied dimension 1 on every occupied level");
    inv += 1 / ls.energy(i);
  }
  return 1 / inv;
}

LowerBounds lower_bounds(const LatticeSpectrum& ls, std::optional<int> n) {
  const LcmPlan p = lcm_plan(ls);
  LowerBounds b;
  b.lcm_lower = ls.unit * Rational(p.M_S) / Rational(p.K_S + 1);
  bool nondegenerate = true;
  for (auto i : ls.occupied_levels()) nondegenerate = nondegenerate && ls.occupied[i] == 1;
  if (nondegenerate) b.harmonic_lower = harmonic_lower_bound(ls);
  if (n) {
    if (*n < 1) throw InvalidArgument("copy count must be at least 1");
    BigInt blocks = BigInt(*n) / (p.K_S + 1);
    b.finite_n_lower = Rational(blocks) * ls.unit * Rational(p.M_S) / Rational(*n);
  }
  return b;
}

Rational ergotropy_diagonal(const std::map<std::size_t, Rational>& level_pops, const Spectrum& s) {
  const Spectrum ns = normalize_ground(s);
  Rational total = 0;
  for (const auto& [i, p] : level_pops) {
    if (i >= ns.size()) throw InvalidArgument("population on a level that does not exist");
    if (sgn(p) < 0) throw InvalidArgument("negative population");
    if (sgn(p) > 0 && ns.level(i).occupied == 0) throw InvalidArgument("population on an unoccupied level");
    total += p;
  }
  if (total != 1) throw InvalidArgument("level populations do not sum to 1");

  std::vector<Rational> pops;
  std::vector<Rational> energies;
  Rational mean = 0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const auto& l = ns.level(i);
    auto it = level_pops.find(i);
    const Rational p = it == level_pops.end() ? Rational(0) : it->second;
    mean += p * l.energy;
    for (int k = 0; k < l.degeneracy; ++k) {
      energies.push_back(l.energy);
      pops.push_back(k < l.occupied ? p / Rational(l.occupied) : Rational(0));
    }
  }
  std::sort(pops.begin(), pops.end(), [](const Rational& a, const Rational& b) { return a > b; });
  Rational passive = 0;
  for (std::size_t k = 0; k < pops.size(); ++k) passive += pops[k] * energies[k];
  return mean - passive;
}

namespace {

struct Group {
  double weight;
  double energy;
};

std::vector<Group> groups(const Spectrum& s, bool filtered) {
  const Spectrum ns = normalize_ground(s);
  std::vector<Group> g;
  for (const auto& l : ns.levels()) {
    const int w = filtered ? l.occupied : l.degeneracy;
    if (w > 0) g.push_back({static_cast<double>(w), to_double(l.energy)});
  }
  return g;
}

// Lowest group factored out: ln Z = -beta e0 + ln w0 + log1p(R), and
// S - ln w0 - log1p(R) = beta sum r_i (e_i - e0) / (1 + R).
ThermoPoint thermo(const std::vector<Group>& g, double beta) {
  const double e0 = g.front().energy, w0 = g.front().weight;
  double R = 0, excess = 0;
  for (std::size_t i = 1; i < g.size(); ++i) {
    const double r = g[i].weight / w0 * std::exp(-beta * (g[i].energy - e0));
    R += r;
    excess += r * (g[i].energy - e0);
  }
  excess /= (1 + R);
  ThermoPoint t;
  const double log_zp = std::log(w0) + std::log1p(R);
  t.log_Z = -beta * e0 + log_zp;
  t.Z = std::exp(t.log_Z);
  t.energy = e0 + excess;
  t.entropy = log_zp + beta * excess;
  return t;
}

double entropy_gap(const std::vector<Group>& occ, const std::vector<Group>& all, double beta) {
  return thermo(occ, beta).entropy - thermo(all, beta).entropy;
}

}  // namespace

DiagonalState<double> gibbs_filtered_state(const Spectrum& s, double beta) {
  if (!(beta >= 0) || !std::isfinite(beta)) throw InvalidArgument("beta must be finite and non-negative");
  const Spectrum ns = normalize_ground(s);
  const double e0 = to_double(eps_min(ns));
  double Z = 0;
  for (const auto& l : ns.levels())
    if (l.occupied > 0) Z += l.occupied * std::exp(-beta * (to_double(l.energy) - e0));
  DiagonalState<double> st;
  st.copies = 1;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const auto& l = ns.level(i);
    const double p = std::exp(-beta * (to_double(l.energy) - e0)) / Z;
    for (int k = 0; k < l.occupied; ++k)
      if (p > 0) st.populations[{BasisState{static_cast<int>(i), k}}] = p;
  }
  return st;
}

ThermoPoint thermo_curves(const Spectrum& s, double beta, bool filtered) {
  if (!std::isfinite(beta)) throw InvalidArgument("beta must be finite");
  return thermo(groups(s, filtered), beta);
}

std::vector<BetaRoot> entropy_crossings(const Spectrum& s) {
  const auto occ = groups(s, true), all = groups(s, false);
  std::vector<double> grid;
  for (double b = 1e-4; b <= 1e3; b *= 2) grid.push_back(b);

  std::vector<BetaRoot> roots;
  double a = grid.front(), fa = entropy_gap(occ, all, a);
  for (std::size_t k = 1; k < grid.size(); ++k) {
    const double b = grid[k], fb = entropy_gap(occ, all, b);
    if ((fa < 0 && fb > 0) || (fa > 0 && fb < 0)) {
      double lo = a, hi = b, flo = fa;
      while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        const double fm = entropy_gap(occ, all, mid);
        if (fm == 0) {
          lo = hi = mid;
          break;
        }
        if ((fm < 0) == (flo < 0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      const double beta = 0.5 * (lo + hi);
      roots.push_back({beta, entropy_gap(occ, all, beta), thermo(occ, beta).energy - thermo(all, beta).energy});
    }
    a = b;
    fa = fb;
  }
  return roots;
}

BetaRoot solve_beta_star(const Spectrum& s) {
  if (s.full_support()) throw FullSupport("support is the whole space; the bound is 0 and no fixed point exists");
  const auto roots = entropy_crossings(s);
  if (roots.empty()) {
    const auto occ = groups(s, true), all = groups(s, false);
    throw NoSignChange("entropy difference keeps one sign on [1e-4, 1e3]: f(1e-4)=" +
                       to_decimal(entropy_gap(occ, all, 1e-4), 6) + ", f(1e3)=" +
                       to_decimal(entropy_gap(occ, all, 1e3), 6));
  }
  return *std::min_element(roots.begin(), roots.end(),
                           [](const BetaRoot& x, const BetaRoot& y) { return x.gap < y.gap; });
}

ErgotropyBound ergotropy_bound_report(const Spectrum& s) {
  ErgotropyBound r;
  if (s.full_support()) {
    r.note = "full support: bound is 0";
    return r;
  }
  const auto occ = groups(s, true), all = groups(s, false);
  // large-beta limit: the support state tends to its lowest level, the
  // equal-entropy thermal state to the one with entropy ln(occupied dim there)
  const double target = std::log(occ.front().weight);
  double e_full = 0;
  if (target > std::log(all.front().weight)) {
    if (target >= thermo(all, 0).entropy) {
      e_full = thermo(all, 0).energy;
    } else {
      double lo = 0, hi = 1;
      while (thermo(all, hi).entropy > target) hi *= 2;
      for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (thermo(all, mid).entropy > target ? lo : hi) = mid;
      }
      e_full = thermo(all, 0.5 * (lo + hi)).energy;
    }
  }
  r.limit_value = occ.front().energy - e_full;
  r.value = r.limit_value;
  r.note = "large-beta limit";
  for (const auto& root : entropy_crossings(s)) {
    if (root.gap < r.value) {
      r.value = root.gap;
      r.root = root;
      r.note = "entropy fixed point";
    }
  }
  return r;
}

double ergotropy_upper_bound(const Spectrum& s) { return ergotropy_bound_report(s).value; }

SpectrumMoments spectrum_moments(const Spectrum& s) {
  const Spectrum ns = normalize_ground(s);
  SpectrumMoments m;
  for (const auto& l : ns.levels()) {
    const double e = to_double(l.energy);
    m.dim_full += l.degeneracy;
    m.dim_occupied += l.occupied;
    m.mu0 += l.degeneracy * e;
    m.mu_plus += l.occupied * e;
  }
  m.mu0 /= m.dim_full;
  m.mu_plus /= m.dim_occupied;
  for (const auto& l : ns.levels()) {
    const double e = to_double(l.energy);
    m.sigma0_sq += l.degeneracy * (e - m.mu0) * (e - m.mu0);
    m.sigma_plus_sq += l.occupied * (e - m.mu_plus) * (e - m.mu_plus);
  }
  m.sigma0_sq /= m.dim_full;
  m.sigma_plus_sq /= m.dim_occupied;
  return m;
}

CltEstimate clt_estimate(const Spectrum& s) {
  CltEstimate c;
  c.moments = spectrum_moments(s);
  if (s.full_support()) {
    c.note = "full support: estimate is 0";
    return c;
  }
  const auto& m = c.moments;
  if (m.sigma0_sq <= m.sigma_plus_sq)
    throw NotApplicable("estimate needs the full variance to exceed the support variance");
  c.value = m.mu_plus - m.mu0 + std::sqrt(2 * (m.sigma0_sq - m.sigma_plus_sq)) *
                                    std::sqrt(std::log(m.dim_full / m.dim_occupied));
  return c;
}

double gaussian_shell_density(const Spectrum& s, int n, double x, Which which) {
  if (n < 1) throw InvalidArgument("copy count must be at least 1");
  const auto m = spectrum_moments(s);
  const double d = which == Which::full ? m.dim_full : m.dim_occupied;
  const double mu = which == Which::full ? m.mu0 : m.mu_plus;
  const double var = which == Which::full ? m.sigma0_sq : m.sigma_plus_sq;
  if (var <= 0) throw NotApplicable("zero variance: the shell distribution is a single point");
  const double log_value = n * std::log(d) - std::log(static_cast<double>(n)) +
                           0.5 * std::log(n / (2 * std::numbers::pi * var)) - n * (x - mu) * (x - mu) / (2 * var);
  return std::exp(log_value);
}

BoundsReport bounds_report(const Spectrum& s, std::optional<int> n) {
  const Spectrum ns = normalize_ground(s);
  BoundsReport r;
  r.eps_min_bound = eps_min(ns);
  r.ergotropy = ergotropy_bound_report(ns);
  for (const auto& l : ns.levels()) r.degenerate_support = r.degenerate_support || l.occupied > 1;
  if (!ns.ground_occupied()) {
    const LatticeSpectrum ls = to_lattice(ns);
    r.lcm = lcm_plan(ls);
    r.lower = lower_bounds(ls, n);
  }
  try {
    r.clt = clt_estimate(ns);
  } catch (const NotApplicable& e) {
    r.clt_note = e.what();
  }
  return r;
}

}  // namespace detwork
