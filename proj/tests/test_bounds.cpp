#include "doctest.h"

#include <cmath>

#include "detwork/bounds.hpp"
#include "detwork/errors.hpp"
#include "detwork/rate.hpp"
#include "frozen_values.hpp"
#include "test_support.hpp"

using namespace detwork;

namespace {

double population(const DiagonalState<double>& st, int level) {
  double p = 0;
  for (const auto& [s, q] : st.populations)
    if (s.front().level == level) p += q;
  return p;
}

double shannon(const Spectrum& s, double beta, bool filtered) {
  const ThermoPoint tp = thermo_curves(s, beta, filtered);
  double h = 0;
  for (const auto& l : s.levels()) {
    const int dim = filtered ? l.occupied : l.degeneracy;
    if (dim == 0) continue;
    const double p = std::exp(-beta * to_double(l.energy) - tp.log_Z);
    h -= dim * p * std::log(p);
  }
  return h;
}

}  // namespace

TEST_CASE("lcm plan and lower bounds") {
  auto plan = lcm_plan(to_lattice(testing::two_gap()));
  CHECK(plan.M_S == 6);
  CHECK(plan.K.at(1) == 3);
  CHECK(plan.K.at(2) == 2);
  CHECK(plan.K_S == 3);
  CHECK(plan.e_frak == Rational(6, 5));

  plan = lcm_plan(to_lattice(testing::saturating()));
  CHECK(plan.M_S == 3);
  CHECK(plan.K.at(1) == 3);
  CHECK(plan.K.at(2) == 1);
  CHECK(plan.K_S == 2);
  CHECK(plan.e_frak == Rational(3, 4));

  plan = lcm_plan(to_lattice(make_spectrum({"0", "2"}, {1, 2}, {0, 2})));
  CHECK(plan.K.at(1) == 2);
  CHECK(plan.K_S == 2);

  const auto lb = lower_bounds(to_lattice(testing::two_gap()), 8);
  CHECK(lb.lcm_lower == Rational(3, 2));
  CHECK(*lb.harmonic_lower == Rational(6, 5));
  CHECK(*lb.finite_n_lower == Rational(3, 2));
  CHECK(lower_bounds(to_lattice(testing::saturating())).lcm_lower == 1);
  CHECK_FALSE(lower_bounds(to_lattice(make_spectrum({"0", "2"}, {1, 2}, {0, 2}))).harmonic_lower);
  CHECK_THROWS_AS(lcm_plan(to_lattice(testing::spectrum({"0", "1"}, {1, 1}))), NotApplicable);
}

TEST_CASE("ergotropy of level-diagonal states") {
  const Spectrum s = testing::two_gap();
  CHECK(ergotropy_diagonal({{1, Rational(1, 2)}, {2, Rational(1, 2)}}, s) == Rational(3, 2));
  const Spectrum full = testing::spectrum({"0", "2", "3"}, {1, 1, 1});
  CHECK(ergotropy_diagonal({{0, Rational(1, 2)}, {1, Rational(1, 3)}, {2, Rational(1, 6)}}, full) == 0);
  CHECK(ergotropy_diagonal({{0, Rational(1, 6)}, {1, Rational(1, 3)}, {2, Rational(1, 2)}}, full) == 1);
  CHECK(ergotropy_diagonal({{2, Rational(1)}}, s) == 3);
  const Spectrum deg = make_spectrum({"0", "1"}, {1, 3}, {1, 3});
  CHECK(ergotropy_diagonal({{0, Rational(1, 4)}, {1, Rational(3, 4)}}, deg) == 0);
  CHECK(ergotropy_diagonal({{1, Rational(1)}}, deg) >= 0);
}

TEST_CASE("filtered thermal states") {
  auto st = gibbs_filtered_state(testing::two_gap(), 0.0);
  CHECK(population(st, 0) == 0.0);
  CHECK(population(st, 1) == doctest::Approx(0.5));
  CHECK(population(st, 2) == doctest::Approx(0.5));
  st = gibbs_filtered_state(testing::two_gap(), 50.0);
  CHECK(population(st, 1) == doctest::Approx(1.0).epsilon(1e-10));
  st = gibbs_filtered_state(testing::spectrum({"0", "1"}, {1, 1}), std::log(2.0));
  CHECK(population(st, 0) == doctest::Approx(2.0 / 3).epsilon(1e-12));
  CHECK(population(st, 1) == doctest::Approx(1.0 / 3).epsilon(1e-12));
}

TEST_CASE("thermodynamic curves") {
  auto tp = thermo_curves(testing::spectrum({"0", "1", "2"}, {0, 1, 1}), 0.0, false);
  CHECK(tp.Z == doctest::Approx(3));
  CHECK(tp.entropy == doctest::Approx(std::log(3.0)));
  tp = thermo_curves(testing::spectrum({"0", "1", "2"}, {0, 1, 1}), 0.0, true);
  CHECK(tp.Z == doctest::Approx(2));
  CHECK(tp.entropy == doctest::Approx(std::log(2.0)));
  tp = thermo_curves(testing::spectrum({"0", "1"}, {0, 1}), 1.0, false);
  CHECK(std::abs(tp.Z - frozen::thermo_Z) < 1e-10);
  CHECK(std::abs(tp.energy - frozen::thermo_E) < 1e-10);
  CHECK(std::abs(tp.entropy - frozen::thermo_S) < 1e-10);
}

TEST_CASE("entropy from the partition function equals the Shannon entropy") {
  const Spectrum deg = make_spectrum({"0", "1/2", "2", "7/3"}, {2, 1, 3, 1}, {0, 1, 2, 1});
  for (const Spectrum& s : {testing::two_gap(), testing::scaled(), deg})
    for (double beta : {0.0, 0.1, 0.7, 1.5, 4.0, 12.0})
      for (bool filtered : {false, true}) CHECK(std::abs(thermo_curves(s, beta, filtered).entropy - shannon(s, beta, filtered)) < 1e-10);
}

TEST_CASE("filtered mean energy decreases with beta") {
  for (const Spectrum& s : {testing::two_gap(), testing::scaled(), testing::saturating()}) {
    double prev = thermo_curves(s, 0.0, true).energy;
    for (double beta = 0.05; beta < 8; beta += 0.05) {
      const double e = thermo_curves(s, beta, true).energy;
      CHECK(e < prev);
      prev = e;
    }
  }
}

TEST_CASE("entropy crossing") {
  BetaRoot r = solve_beta_star(testing::two_gap());
  CHECK(r.beta == doctest::Approx(frozen::beta_hat_023).epsilon(1e-9));
  CHECK(std::abs(r.residual) <= 1e-10);
  CHECK(r.gap == doctest::Approx(frozen::bound_023).epsilon(1e-9));
  r = solve_beta_star(testing::scaled());
  CHECK(r.beta == doctest::Approx(frozen::beta_hat_two_thirds).epsilon(1e-9));
  CHECK(r.gap == doctest::Approx(frozen::bound_two_thirds).epsilon(1e-9));
  CHECK_THROWS_AS(solve_beta_star(testing::saturating()), NoSignChange);
  CHECK_THROWS_AS(solve_beta_star(make_spectrum({"0", "1"}, {1, 2}, {1, 2})), FullSupport);
}

TEST_CASE("ergotropy upper bound") {
  const double b = ergotropy_upper_bound(testing::two_gap());
  CHECK(b == doctest::Approx(frozen::bound_023).epsilon(1e-9));
  CHECK(b > 4.0 / 3);
  CHECK(b <= 2);
  CHECK(b <= frozen::scanned_min_023);
  CHECK(ergotropy_upper_bound(testing::scaled()) == doctest::Approx(frozen::bound_two_thirds).epsilon(1e-9));
  CHECK(ergotropy_upper_bound(testing::saturating()) == doctest::Approx(frozen::bound_013));
  CHECK(ergotropy_upper_bound(make_spectrum({"0", "1"}, {1, 2}, {1, 2})) == 0);
  CHECK(ergotropy_upper_bound(testing::spectrum({"0", "1", "3"}, {0, 0, 1})) == doctest::Approx(3));
}

TEST_CASE("Gaussian estimate") {
  CltEstimate c = clt_estimate(testing::two_gap());
  CHECK(std::abs(c.value - frozen::clt_023) < 1e-9);
  CHECK(c.moments.mu0 == doctest::Approx(5.0 / 3));
  CHECK(c.moments.sigma0_sq == doctest::Approx(14.0 / 9));
  CHECK(c.moments.mu_plus == doctest::Approx(2.5));
  CHECK(c.moments.sigma_plus_sq == doctest::Approx(0.25));
  c = clt_estimate(testing::scaled());
  CHECK(std::abs(c.value - frozen::clt_two_thirds) < 1e-9);
  c = clt_estimate(make_spectrum({"0", "1"}, {1, 1}, {1, 1}));
  CHECK(c.value == 0);
  CHECK_FALSE(c.note.empty());

  const Spectrum s = testing::scaled();
  const double mu = spectrum_moments(s).mu0;
  const double peak = std::pow(3.0, 20) / 20 * std::sqrt(20 / (2 * M_PI * spectrum_moments(s).sigma0_sq));
  CHECK(gaussian_shell_density(s, 20, mu, Which::full) == doctest::Approx(peak));
}

TEST_CASE("bound ordering on random spectra") {
  for (const auto& s : testing::random_spectra(testing::kDefaultSeed, 30)) {
    const auto ls = to_lattice(s);
    const auto lb = lower_bounds(ls);
    const auto plan = lcm_plan(ls);
    if (lb.harmonic_lower) CHECK(*lb.harmonic_lower <= lb.lcm_lower);
    const int n_lcm = static_cast<int>(plan.K_S.get_si()) + 1;
    const Rational r_lcm = rate_n(s, n_lcm).rate;
    CHECK(lb.lcm_lower <= r_lcm);
    const double ub = ergotropy_upper_bound(s);
    CHECK(to_double(r_lcm) <= ub + 1e-9);
    CHECK(ub <= to_double(eps_min(s)) + 1e-9);
  }
}

TEST_CASE("fixed-point residual on random spectra") {
  for (const auto& s : testing::random_spectra(testing::kDefaultSeed, 100))
    for (const auto& r : entropy_crossings(s)) CHECK(std::abs(r.residual) <= 1e-10);
}
