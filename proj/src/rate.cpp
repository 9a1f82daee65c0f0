#include "detwork/rate.hpp"

#include <map>

#include "detwork/errors.hpp"

namespace detwork {

bool shift_feasible(const ShellCounts& occupied, const ShellCounts& full, std::int64_t shift) {
  if (shift < 0) return false;
  for (std::size_t t = 0; t < occupied.counts.size(); ++t) {
    const BigInt& need = occupied.counts[t];
    if (sgn(need) == 0) continue;
    if (need > full.at(static_cast<std::int64_t>(t) - shift)) return false;
  }
  return true;
}

std::int64_t max_det_shift(const LatticeSpectrum& ls, int n) {
  const ShellCounts full = shell_counts(ls, n, Weight::full);
  const ShellCounts occ = shell_counts(ls, n, Weight::occupied);

  std::vector<std::int64_t> shells;
  for (std::size_t t = 0; t < occ.counts.size(); ++t)
    if (sgn(occ.counts[t]) != 0) shells.push_back(static_cast<std::int64_t>(t));

  // nothing can land below the lowest full shell
  const std::int64_t top = shells.front() - full.first_nonzero();
  for (std::int64_t s = top; s > 0; --s) {
    bool ok = true;
    for (auto t : shells) {
      if (occ.counts[static_cast<std::size_t>(t)] > full.at(t - s)) {
        ok = false;
        break;
      }
    }
    if (ok) return s;
  }
  return 0;
}

RateResult rate_n(const Spectrum& s, int n) {
  const LatticeSpectrum ls = to_lattice(normalize_ground(s));
  const std::int64_t shift = max_det_shift(ls, n);
  RateResult r{n, shift, ls.unit * Rational(shift), 0};
  r.rate = r.work_total / Rational(n);
  return r;
}

std::vector<RateResult> rate_sweep(const Spectrum& s, int n_from, int n_to) {
  if (n_from < 1 || n_to < n_from) throw InvalidArgument("rate sweep needs 1 <= n_from <= n_to");
  std::vector<RateResult> out;
  for (int n = n_from; n <= n_to; ++n) out.push_back(rate_n(s, n));
  return out;
}

namespace {

// Multiset of total energies over all strings of n basis states, each state
// of level i contributing its energy; returns energy -> number of strings.
std::map<Rational, std::uint64_t> energy_histogram(const std::vector<Rational>& state_energies, int n) {
  std::map<Rational, std::uint64_t> hist;
  if (state_energies.empty()) return hist;
  std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
  for (;;) {
    Rational e = 0;
    for (auto k : idx) e += state_energies[k];
    ++hist[e];
    std::size_t pos = 0;
    while (pos < idx.size() && ++idx[pos] == state_energies.size()) idx[pos++] = 0;
    if (pos == idx.size()) break;
  }
  return hist;
}

std::uint64_t string_count(std::uint64_t dim, int n, std::uint64_t limit) {
  std::uint64_t c = 1;
  for (int k = 0; k < n; ++k) {
    if (dim != 0 && c > limit / dim) throw ResourceLimitExceeded("brute-force enumeration exceeds the limit");
    c *= dim;
  }
  if (c > limit) throw ResourceLimitExceeded("brute-force enumeration exceeds the limit");
  return c;
}

}  // namespace

RateResult brute_force_mdew(const Spectrum& s, int n, std::uint64_t max_strings) {
  if (n < 1) throw InvalidArgument("copy count must be at least 1");
  const Spectrum ns = normalize_ground(s);
  string_count(static_cast<std::uint64_t>(ns.occupied_dimension()), n, max_strings);
  // the full space is enumerated too; allow it the square of the budget
  string_count(static_cast<std::uint64_t>(ns.total_dimension()), n, max_strings > 4'000'000'000ULL ? max_strings : max_strings * max_strings);

  std::vector<Rational> occ_states, all_states;
  for (const auto& l : ns.levels()) {
    for (int k = 0; k < l.degeneracy; ++k) all_states.push_back(l.energy);
    for (int k = 0; k < l.occupied; ++k) occ_states.push_back(l.energy);
  }
  const auto occ = energy_histogram(occ_states, n);
  const auto all = energy_histogram(all_states, n);

  std::map<Rational, bool> candidates;
  for (const auto& [ein, c1] : occ)
    for (const auto& [eout, c2] : all)
      if (ein >= eout) candidates[ein - eout] = true;

  Rational best = 0;
  for (auto it = candidates.rbegin(); it != candidates.rend(); ++it) {
    const Rational& w = it->first;
    bool ok = true;
    for (const auto& [ein, need] : occ) {
      auto target = all.find(ein - w);
      if (target == all.end() || target->second < need) {
        ok = false;
        break;
      }
    }
    if (ok) {
      best = w;
      break;
    }
  }

  const LatticeSpectrum ls = to_lattice(ns);
  Rational shift = best / ls.unit;
  if (shift.get_den() != 1) throw InvariantViolation("brute-force work is not on the lattice");
  RateResult r{n, to_int64(shift.get_num(), "shift"), best, best / Rational(n)};
  return r;
}

Rational binomial_rate_2level(int d1, int delta1, int n) {
  if (d1 < 1 || delta1 < 1 || delta1 > d1 || n < 1)
    throw InvalidArgument("binomial_rate_2level needs 1 <= delta1 <= d1 and n >= 1");
  BigInt d1n, delta1n;
  mpz_ui_pow_ui(d1n.get_mpz_t(), static_cast<unsigned long>(d1), static_cast<unsigned long>(n));
  mpz_ui_pow_ui(delta1n.get_mpz_t(), static_cast<unsigned long>(delta1), static_cast<unsigned long>(n));
  int best = 0;
  BigInt d1k = 1;
  for (int k = 0; k <= n; ++k) {
    if (binomial(static_cast<unsigned long>(n), static_cast<unsigned long>(k)) * d1n >= d1k * delta1n) best = k;
    d1k *= d1;
  }
  Rational r(best, n);
  r.canonicalize();
  return r;
}

}  // namespace detwork
