#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "detwork/rational.hpp"
#include "detwork/spectrum.hpp"

namespace testing {

inline constexpr std::uint64_t kDefaultSeed = 20240611;

inline detwork::Spectrum spectrum(const std::vector<std::string>& e, const std::vector<int>& occ) {
  return detwork::make_spectrum(e, std::vector<int>(e.size(), 1), occ);
}

// Three spectra worked through by hand: (0,2,3), (0,1,3), (0,2/3,1), ground empty.
inline detwork::Spectrum two_gap() { return spectrum({"0", "2", "3"}, {0, 1, 1}); }
inline detwork::Spectrum saturating() { return spectrum({"0", "1", "3"}, {0, 1, 1}); }
inline detwork::Spectrum scaled() { return spectrum({"0", "2/3", "1"}, {0, 1, 1}); }

/// Random rational spectrum: total dimension 2..4, lattice indices up to 6,
/// ground unoccupied, at least one occupied sublevel.
inline detwork::Spectrum random_spectrum(std::mt19937_64& rng) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  const int d = pick(2, 4);
  const int levels = pick(2, d);
  std::vector<int> deg(levels, 1);
  for (int extra = d - levels; extra > 0; --extra) ++deg[pick(0, levels - 1)];

  std::vector<int> pool{1, 2, 3, 4, 5, 6};
  std::shuffle(pool.begin(), pool.end(), rng);
  std::vector<int> m(pool.begin(), pool.begin() + (levels - 1));
  std::sort(m.begin(), m.end());
  m.insert(m.begin(), 0);

  static const char* units[] = {"1", "1/2", "2/3", "3/2", "5/7", "0.3"};
  const detwork::Rational unit = detwork::parse_rational(units[pick(0, 5)]);

  std::vector<detwork::LevelSpec> out;
  for (int i = 0; i < levels; ++i) out.push_back({unit * m[i], deg[i], i == 0 ? 0 : pick(0, deg[i])});
  if (std::none_of(out.begin(), out.end(), [](const auto& l) { return l.occupied > 0; }))
    out[pick(1, levels - 1)].occupied = 1;
  return detwork::Spectrum(std::move(out), "random");
}

inline std::vector<detwork::Spectrum> random_spectra(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::vector<detwork::Spectrum> out;
  for (int i = 0; i < count; ++i) out.push_back(random_spectrum(rng));
  return out;
}

// Oracle shell counts by n successive plain convolutions (no squaring, no GMP).
inline std::vector<unsigned long long> convolve_counts(const std::vector<long>& m, const std::vector<int>& w, int n) {
  std::vector<unsigned long long> acc{1};
  for (int k = 0; k < n; ++k) {
    std::vector<unsigned long long> next(acc.size() + m.back(), 0);
    for (std::size_t t = 0; t < acc.size(); ++t)
      for (std::size_t i = 0; i < m.size(); ++i) next[t + m[i]] += acc[t] * static_cast<unsigned long long>(w[i]);
    acc = std::move(next);
  }
  return acc;
}

// Oracle max shift: largest s with occ(t) <= full(t - s) for every t.
inline long oracle_max_shift(const std::vector<long>& m, const std::vector<int>& deg, const std::vector<int>& occ,
                             int n) {
  const auto full = convolve_counts(m, deg, n);
  const auto part = convolve_counts(m, occ, n);
  for (long s = static_cast<long>(full.size()) - 1; s > 0; --s) {
    bool ok = true;
    for (long t = 0; t < static_cast<long>(part.size()) && ok; ++t)
      if (part[t] > 0) ok = t - s >= 0 && part[t] <= full[t - s];
    if (ok) return s;
  }
  return 0;
}

}  // namespace testing
