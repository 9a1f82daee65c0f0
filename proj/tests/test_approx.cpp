#include "doctest.h"

#include <cmath>

#include "detwork/approx.hpp"
#include "detwork/bounds.hpp"
#include "detwork/errors.hpp"
#include "detwork/rate.hpp"
#include "frozen_values.hpp"
#include "test_support.hpp"

using namespace detwork;

namespace {

Spectrum irrational() { return testing::spectrum({"0", "1.41421356", "3.14159265"}, {0, 1, 1}); }

}  // namespace

TEST_CASE("snapping non-degenerate levels") {
  const ApproxPlan p = snap_to_lattice(testing::spectrum({"0", "1.0", "2.5"}, {0, 1, 1}), Rational(1, 2));
  CHECK(p.snapped.unit == Rational(1, 2));
  CHECK(p.snapped.m == std::vector<std::int64_t>{0, 3, 6});
  CHECK(p.origin == std::vector<std::size_t>{0, 1, 2});
  CHECK(p.snapped.occupied == std::vector<int>{0, 1, 1});
}

TEST_CASE("snapping splits degenerate levels") {
  const ApproxPlan p = snap_to_lattice(make_spectrum({"0", "1.0"}, {1, 2}, {0, 1}), Rational(1, 2));
  CHECK(p.d_star == 2);
  CHECK(p.snapped.unit == Rational(1, 4));
  CHECK(p.snapped.m == std::vector<std::int64_t>{0, 5, 6});
  CHECK(p.snapped.energy(1) == Rational(5, 4));
  CHECK(p.snapped.energy(2) == Rational(3, 2));
  CHECK(p.snapped.occupied == std::vector<int>{0, 1, 0});
  CHECK(p.snapped.degeneracy == std::vector<int>{1, 1, 1});
}

TEST_CASE("split ground follows the same rule as other levels") {
  const ApproxPlan p = snap_to_lattice(make_spectrum({"0", "1.0"}, {2, 1}, {0, 1}), Rational(1, 2), GroundMode::split);
  CHECK(p.snapped.unit == Rational(1, 4));
  CHECK(p.snapped.m == std::vector<std::int64_t>{1, 2, 5});
}

TEST_CASE("snapping preconditions") {
  const Spectrum s = testing::spectrum({"0", "1.0", "2.5"}, {0, 1, 1});
  CHECK_THROWS_AS(snap_to_lattice(s, Rational(1)), InvalidArgument);
  CHECK_THROWS_AS(snap_to_lattice(s, Rational(0)), InvalidArgument);
  CHECK_THROWS_AS(snap_to_lattice(s, Rational(-1, 10)), InvalidArgument);
}

TEST_CASE("snap accuracy on random spectra") {
  for (const auto& s : testing::random_spectra(testing::kDefaultSeed, 50)) {
    Rational gap = s.level(1).energy;
    for (std::size_t i = 1; i + 1 < s.size(); ++i) gap = std::min<Rational>(gap, s.level(i + 1).energy - s.level(i).energy);
    for (GroundMode g : {GroundMode::pinned, GroundMode::split}) {
      const Rational delta = gap / 3;
      const ApproxPlan p = snap_to_lattice(s, delta, g);
      for (std::size_t k = 0; k < p.snapped.size(); ++k) {
        Rational dev = p.snapped.energy(k) - s.level(p.origin[k]).energy;
        CHECK(abs(dev) <= delta);
      }
    }
  }
}

TEST_CASE("guarantee constants") {
  const ApproxPlan p = plan_bounded_fluctuation(irrational(), Rational(1, 20), 0.5);
  CHECK(to_double(p.e_frak) == doctest::Approx(frozen::e_frak_irrational).epsilon(1e-11));
  CHECK(p.d_star == 1);
  CHECK(p.target == doctest::Approx(0.5 * frozen::e_frak_irrational - 0.1));
  // A = c/(1-c) k (d* eps_max + 1)^(k-1) with k = 2
  CHECK(p.A_const == doctest::Approx(2 * (3.14159265 + 1)));
  CHECK(p.n_min == doctest::Approx(p.A_const * std::pow(0.05, -1.0)));
  CHECK(p.band == Rational(1, 5));

  const ApproxPlan zero = plan_bounded_fluctuation(irrational(), Rational(1, 20), 0.0);
  CHECK(zero.n_min == 0);
  CHECK(zero.target == 0);
  CHECK_THROWS_AS(plan_bounded_fluctuation(irrational(), Rational(1, 20), 1.0), InvalidArgument);
  CHECK_THROWS_AS(plan_bounded_fluctuation(testing::spectrum({"0", "1"}, {1, 1}), Rational(1, 20), 0.5), NotApplicable);

  const ApproxPlan tiny = plan_bounded_fluctuation(make_spectrum({"0", "1", "2", "3"}, {1, 2, 2, 2}, {0, 2, 2, 2}),
                                                   Rational(1, 1000), 0.9);
  CHECK(tiny.astronomical);
  CHECK_FALSE(tiny.warning.empty());
}

TEST_CASE("one copy of an incommensurable spectrum extracts nothing") {
  const auto r = bounded_fluctuation_protocol(plan_bounded_fluctuation(irrational(), Rational(1, 20), 0.5), 1);
  CHECK_FALSE(r.positive_shift);
  CHECK(r.table.shift == 0);
  CHECK(r.band.pass);
  CHECK(r.band.max_work == 0);
}

TEST_CASE("band holds at the first productive copy count") {
  for (GroundMode g : {GroundMode::split, GroundMode::pinned}) {
    const ApproxPlan plan = plan_bounded_fluctuation(irrational(), Rational(1, 20), 0.5, g);
    const int n = g == GroundMode::split ? frozen::first_n_split : frozen::first_n_pinned;
    CHECK_FALSE(bounded_fluctuation_protocol(plan, n - 1).positive_shift);
    const auto r = bounded_fluctuation_protocol(plan, n);
    CHECK(r.positive_shift);
    CHECK(r.table.shift == (g == GroundMode::split ? frozen::first_shift_split : frozen::first_shift_pinned));
    CHECK(r.band.pass);
    CHECK(r.band.spread <= Rational(1, 5));
    CHECK(r.band.max_level_deviation <= Rational(1, 20));
    CHECK(abs(r.band.mean_work - r.band.w_prime) <= Rational(1, 10));
  }
}

TEST_CASE("verify_band rejects a corrupted table") {
  const ApproxPlan plan = plan_bounded_fluctuation(irrational(), Rational(1, 20), 0.5, GroundMode::split);
  const auto r = bounded_fluctuation_protocol(plan, 4, true);
  REQUIRE(r.table.explicit_map);

  const BandReport off = verify_band(r.table, irrational(), r.band.w_prime + Rational(1), Rational(1, 20));
  CHECK_FALSE(off.pass);
  CHECK_FALSE(off.offending.empty());

  ProtocolTable bad = r.table;
  (*bad.explicit_map)[0].second = (*bad.explicit_map)[1].second;
  const BandReport broken = verify_band(bad, irrational(), r.band.w_prime, Rational(1, 20));
  CHECK_FALSE(broken.pass);
  CHECK_FALSE(broken.structural_error.empty());
}

TEST_CASE("identity protocol passes with zero work") {
  const ApproxPlan plan = snap_to_lattice(irrational(), Rational(1, 20));
  const ProtocolTable id = build_protocol(plan.snapped, 2, 0, true);
  const BandReport rep = verify_band(id, irrational(), Rational(0), Rational(1, 20));
  CHECK(rep.pass);
  CHECK(rep.max_work == 0);
  CHECK(rep.min_work == 0);
}

TEST_CASE("snapped rates match exact rates on a rational spectrum when the ground is split") {
  const Spectrum s = testing::two_gap();
  for (const char* d : {"1/2", "1/4", "1/8"}) {
    const ApproxPlan plan = snap_to_lattice(s, parse_rational(d), GroundMode::split);
    for (int n = 1; n <= 6; ++n) {
      const auto r = bounded_fluctuation_protocol(plan, n);
      CHECK(r.table.work() / n == rate_n(s, n).rate);
      CHECK(r.band.pass);
    }
  }
}
