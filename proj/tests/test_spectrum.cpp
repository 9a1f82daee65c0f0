#include "doctest.h"

#include "detwork/errors.hpp"
#include "detwork/io.hpp"
#include "detwork/spectrum.hpp"
#include "test_support.hpp"

using namespace detwork;

TEST_CASE("construction validates the level list") {
  CHECK_THROWS_AS(Spectrum({}), InvalidSpectrum);
  CHECK_THROWS_AS(testing::spectrum({"0", "1", "1"}, {0, 1, 1}), InvalidSpectrum);
  CHECK_THROWS_AS(testing::spectrum({"0", "1"}, {0, 0}), InvalidSpectrum);
  CHECK_THROWS_AS(make_spectrum({"0", "1"}, {1, 2}, {0, 3}), InvalidSpectrum);
  CHECK_THROWS_AS(make_spectrum({"0", "1"}, {0, 1}, {0, 0}), InvalidSpectrum);
  CHECK_NOTHROW(testing::two_gap());
}

TEST_CASE("accessors") {
  const Spectrum s = make_spectrum({"0", "1", "3"}, {1, 2, 2}, {0, 2, 1});
  CHECK(s.total_dimension() == 5);
  CHECK(s.occupied_dimension() == 3);
  CHECK(s.occupied_levels() == std::vector<std::size_t>{1, 2});
  CHECK_FALSE(s.full_support());
  CHECK_FALSE(s.ground_occupied());
  CHECK(eps_min(s) == 1);
  CHECK(make_spectrum({"0", "1"}, {1, 2}, {1, 2}).full_support());
}

TEST_CASE("parse_spectrum keeps decimal literals exact and normalizes the ground") {
  const Spectrum s = parse_spectrum(R"({"label":"x","levels":[{"energy":0.1,"occupied":0},
      {"energy":1.2,"degeneracy":2,"occupied":1},{"energy":"7/2","occupied":1}]})");
  CHECK(s.label() == "x");
  CHECK(s.normalized());
  CHECK(s.ground_shift() == Rational(1, 10));
  CHECK(s.level(1).energy == Rational(11, 10));
  CHECK(s.level(1).degeneracy == 2);
  CHECK(s.level(2).energy == Rational(17, 5));
  CHECK_THROWS_AS(parse_spectrum("{"), InvalidSpectrum);
  CHECK_THROWS_AS(parse_spectrum(R"({"levels":[{"energy":0}]})"), InvalidSpectrum);
  CHECK_THROWS_AS(parse_spectrum(R"({"levels":[{"energy":0,"occupied":1,"degeneracy":0}]})"), InvalidSpectrum);
}

TEST_CASE("spectrum JSON round-trip") {
  const Spectrum s = make_spectrum({"0", "2/3", "1.5"}, {1, 3, 2}, {0, 2, 2}, "rt");
  const Spectrum back = parse_spectrum(spectrum_to_json(s));
  REQUIRE(back.size() == s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(back.level(i).energy == s.level(i).energy);
    CHECK(back.level(i).degeneracy == s.level(i).degeneracy);
    CHECK(back.level(i).occupied == s.level(i).occupied);
  }
  CHECK(back.label() == "rt");
}

TEST_CASE("normalize_ground is idempotent") {
  const Spectrum raw(std::vector<LevelSpec>{{Rational(5), 1, 0}, {Rational(7), 1, 1}});
  const Spectrum once = normalize_ground(raw);
  const Spectrum twice = normalize_ground(once);
  CHECK(once.level(1).energy == 2);
  CHECK(twice.level(1).energy == 2);
  CHECK(twice.ground_shift() == 5);
}

TEST_CASE("to_lattice uses the rational gcd") {
  auto ls = to_lattice(testing::spectrum({"0", "1.1"}, {0, 1}));
  CHECK(ls.unit == Rational(11, 10));
  CHECK(ls.m == std::vector<std::int64_t>{0, 1});
  ls = to_lattice(testing::scaled());
  CHECK(ls.unit == Rational(1, 3));
  CHECK(ls.m == std::vector<std::int64_t>{0, 2, 3});
  CHECK(ls.energy(2) == 1);
  ls = to_lattice(make_spectrum({"0"}, {2}, {1}));
  CHECK(ls.unit == 1);
  CHECK(ls.m == std::vector<std::int64_t>{0});
}

TEST_CASE("lattice energies reproduce the spectrum on random instances") {
  for (const auto& s : testing::random_spectra(testing::kDefaultSeed, 50)) {
    const auto ls = to_lattice(s);
    CHECK_NOTHROW(validate_lattice(ls));
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(ls.energy(i) == s.level(i).energy);
  }
}

TEST_CASE("dominates is a partial order on supports") {
  const Spectrum a = make_spectrum({"0", "1", "2"}, {1, 2, 2}, {0, 1, 1});
  const Spectrum b = make_spectrum({"0", "1", "2"}, {1, 2, 2}, {0, 2, 1});
  const Spectrum c = make_spectrum({"0", "1", "2"}, {1, 2, 2}, {0, 1, 2});
  CHECK(dominates(a, a));
  CHECK(dominates(a, b));
  CHECK_FALSE(dominates(b, a));
  CHECK_FALSE(dominates(b, c));
  CHECK_FALSE(dominates(c, b));
  CHECK_THROWS_AS(dominates(a, testing::two_gap()), InvalidArgument);
}
