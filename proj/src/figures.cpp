#include "detwork/figures.hpp"

#include <cmath>
#include <future>

#include "detwork/bounds.hpp"
#include "detwork/errors.hpp"
#include "detwork/rate.hpp"
#include "detwork/shellcount.hpp"

namespace detwork {

namespace {

std::string clt_cell(const Spectrum& s) {
  try {
    return to_decimal(clt_estimate(s).value);
  } catch (const NotApplicable&) {
    return "nan";
  }
}

}  // namespace

Table figure_r100(const Rational& eps2_from, const Rational& eps2_to, const Rational& step, int n) {
  if (sgn(step) <= 0) throw InvalidArgument("step must be positive");
  if (eps2_from <= 1) throw InvalidArgument("eps2 must exceed 1");
  if (eps2_to < eps2_from) throw InvalidArgument("empty eps2 range");
  if (n < 1) throw InvalidArgument("copy count must be at least 1");

  std::vector<Rational> grid;
  for (Rational e = eps2_from; e <= eps2_to; e += step) grid.push_back(e);

  auto point = [n](const Rational& eps2) {
    const Spectrum s({{0, 1, 0}, {1, 1, 1}, {eps2, 1, 1}});
    const RateResult r = rate_n(s, n);
    const LowerBounds lb = lower_bounds(to_lattice(s), n);
    return std::vector<std::string>{to_string(eps2),
                                    to_string(r.rate),
                                    to_decimal(r.rate),
                                    to_decimal(ergotropy_upper_bound(s)),
                                    clt_cell(s),
                                    to_string(*lb.finite_n_lower)};
  };
  std::vector<std::future<std::vector<std::string>>> jobs;
  for (const auto& e : grid) jobs.push_back(std::async(std::launch::async, point, e));

  Table t{{"eps2", "rate", "rate_decimal", "upper_bound", "clt", "floor_lower"}, {}};
  for (auto& j : jobs) t.rows.push_back(j.get());
  return t;
}

Table figure_rates_vs_n(const Spectrum& s, int n_max) {
  if (n_max < 1) throw InvalidArgument("n_max must be at least 1");
  const Spectrum ns = normalize_ground(s);
  const std::string upper = to_decimal(ergotropy_upper_bound(ns));
  const std::string clt = clt_cell(ns);
  std::string lcm = "nan";
  if (!ns.ground_occupied()) lcm = to_string(lower_bounds(to_lattice(ns)).lcm_lower);
  Table t{{"n", "rate", "rate_decimal", "lcm_lower", "upper_bound", "clt"}, {}};
  for (const auto& r : rate_sweep(ns, 1, n_max))
    t.rows.push_back({std::to_string(r.n), to_string(r.rate), to_decimal(r.rate), lcm, upper, clt});
  return t;
}

Table figure_gaussians(const Spectrum& s, int n) {
  const Spectrum ns = normalize_ground(s);
  const LatticeSpectrum ls = to_lattice(ns);
  const ShellCounts full = shell_counts(ls, n, Weight::full);
  const ShellCounts occ = shell_counts(ls, n, Weight::occupied);
  const double unit = to_double(ls.unit);
  auto estimate = [&](double x, Which w) {
    try {
      return to_decimal(gaussian_shell_density(ns, n, x, w) * unit, 12);
    } catch (const NotApplicable&) {
      return std::string("nan");
    }
  };
  Table t{{"t", "x", "exact_full", "gaussian_full", "exact_occupied", "gaussian_occupied"}, {}};
  for (std::size_t k = 0; k < full.counts.size(); ++k) {
    if (sgn(full.counts[k]) == 0 && sgn(occ.counts[k]) == 0) continue;
    const Rational x = ls.unit * Rational(static_cast<long>(k)) / Rational(n);
    const double xd = to_double(x);
    t.rows.push_back({std::to_string(k), to_decimal(x), to_string(full.counts[k]), estimate(xd, Which::full),
                      to_string(occ.counts[k]), estimate(xd, Which::occupied)});
  }
  return t;
}

}  // namespace detwork
