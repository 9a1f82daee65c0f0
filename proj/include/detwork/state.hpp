#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "detwork/errors.hpp"
#include "detwork/rational.hpp"

namespace detwork {

struct BasisState {
  int level = 0;
  int sublevel = 0;
  auto operator<=>(const BasisState&) const = default;
};

/// One basis state per copy.
using BasisString = std::vector<BasisState>;

namespace detail {
inline bool is_zero(const Rational& p) { return sgn(p) == 0; }
inline bool is_zero(double p) { return p == 0.0; }
inline bool is_negative(const Rational& p) { return sgn(p) < 0; }
inline bool is_negative(double p) { return p < 0.0 || std::isnan(p); }
inline bool is_unit_sum(const Rational& s) { return s == 1; }
inline bool is_unit_sum(double s) { return std::abs(s - 1.0) <= 1e-12; }
inline double as(double, const Rational& x) { return x.get_d(); }
inline Rational as(const Rational&, const Rational& x) { return x; }
}  // namespace detail

/// Energy-diagonal state of `copies` systems: probability per basis string.
/// P is Rational (exact) or double.
template <class P>
struct DiagonalState {
  int copies = 1;
  std::map<BasisString, P> populations;

  /// Throws InvalidArgument on negative entries, wrong string length or a
  /// total away from 1 (exactly for Rational, 1e-12 for double).
  void validate() const {
    P total{0};
    for (const auto& [s, p] : populations) {
      if (static_cast<int>(s.size()) != copies) throw InvalidArgument("basis string length differs from copy count");
      if (detail::is_negative(p)) throw InvalidArgument("negative population");
      total += p;
    }
    if (!detail::is_unit_sum(total)) throw InvalidArgument("populations do not sum to 1");
  }
};

inline constexpr std::uint64_t kDefaultStateLimit = 1'000'000;

/// Product state base^{\otimes n}. Zero populations are dropped.
template <class P>
DiagonalState<P> tensor_power_state(const DiagonalState<P>& base, int n,
                                    std::uint64_t max_entries = kDefaultStateLimit) {
  if (base.copies != 1) throw InvalidArgument("tensor power needs a single-copy base state");
  if (n < 1) throw InvalidArgument("copy count must be at least 1");
  std::vector<std::pair<BasisState, P>> support;
  for (const auto& [s, p] : base.populations)
    if (!detail::is_zero(p)) support.emplace_back(s.front(), p);
  std::uint64_t size = 1;
  for (int k = 0; k < n; ++k) {
    if (!support.empty() && size > max_entries / support.size())
      throw ResourceLimitExceeded("tensor power exceeds the state size limit");
    size *= support.size();
  }
  DiagonalState<P> out;
  out.copies = n;
  if (support.empty()) return out;
  std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
  for (;;) {
    BasisString s;
    P p{1};
    for (auto k : idx) {
      s.push_back(support[k].first);
      p *= support[k].second;
    }
    out.populations.emplace(std::move(s), p);
    std::size_t pos = idx.size();
    while (pos > 0 && ++idx[pos - 1] == support.size()) idx[--pos] = 0;
    if (pos == 0) break;
  }
  return out;
}

/// Work law of a two-point measurement: atoms sorted by work value.
template <class P>
struct WorkDistribution {
  std::vector<std::pair<Rational, P>> atoms;
  P mean{0};
  P variance{0};

  bool deterministic() const { return atoms.size() == 1; }
};

/// Builds the distribution from (work, probability) pairs, merging equal
/// work values and dropping zero weights. Moments are taken about the
/// smallest atom so a single atom gives variance exactly 0.
template <class P>
WorkDistribution<P> make_work_distribution(const std::map<Rational, P>& weights) {
  WorkDistribution<P> d;
  for (const auto& [w, p] : weights)
    if (!detail::is_zero(p)) d.atoms.emplace_back(w, p);
  if (d.atoms.empty()) return d;
  const P w0 = detail::as(P{}, d.atoms.front().first);
  P total{0}, m1{0}, m2{0};
  for (const auto& [w, p] : d.atoms) {
    const P x = detail::as(P{}, w) - w0;
    total += p;
    m1 += p * x;
    m2 += p * x * x;
  }
  m1 /= total;
  m2 /= total;
  d.mean = w0 + m1;
  d.variance = m2 - m1 * m1;
  if (detail::is_negative(d.variance)) d.variance = P{0};
  return d;
}

}  // namespace detwork
