#include "detwork/shellcount.hpp"

#include <algorithm>

#include "detwork/errors.hpp"

namespace detwork {

namespace {

using Poly = std::vector<BigInt>;

Poly multiply(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1);
  std::vector<std::size_t> nz;
  for (std::size_t j = 0; j < b.size(); ++j)
    if (sgn(b[j]) != 0) nz.push_back(j);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (sgn(a[i]) == 0) continue;
    for (std::size_t j : nz) mpz_addmul(out[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
  }
  return out;
}

void check_args(const LatticeSpectrum& ls, int n, Weight weight) {
  validate_lattice(ls);
  if (n < 1) throw InvalidArgument("copy count must be at least 1");
  if (weight == Weight::occupied && ls.occupied_dimension() == 0) throw InvalidSpectrum("no occupied level");
}

std::vector<int> weights(const LatticeSpectrum& ls, Weight weight) {
  return weight == Weight::full ? ls.degeneracy : ls.occupied;
}

const BigInt kZero = 0;

}  // namespace

const BigInt& ShellCounts::at(std::int64_t t) const {
  if (t < 0 || t >= static_cast<std::int64_t>(counts.size())) return kZero;
  return counts[static_cast<std::size_t>(t)];
}

BigInt ShellCounts::total() const {
  BigInt s = 0;
  for (const auto& c : counts) s += c;
  return s;
}

std::int64_t ShellCounts::first_nonzero() const {
  for (std::size_t t = 0; t < counts.size(); ++t)
    if (sgn(counts[t]) != 0) return static_cast<std::int64_t>(t);
  return -1;
}

std::int64_t ShellCounts::last_nonzero() const {
  for (std::size_t t = counts.size(); t-- > 0;)
    if (sgn(counts[t]) != 0) return static_cast<std::int64_t>(t);
  return -1;
}

ShellCounts shell_counts(const LatticeSpectrum& ls, int n, Weight weight, std::int64_t max_length) {
  check_args(ls, n, weight);
  const std::int64_t m_max = ls.m_max();
  if (m_max > (max_length - 1) / n)
    throw ResourceLimitExceeded("shell array length " + BigInt(BigInt(n) * BigInt(static_cast<long>(m_max)) + 1).get_str() +
                                " exceeds the limit " + std::to_string(max_length));
  const auto w = weights(ls, weight);
  Poly base(static_cast<std::size_t>(m_max + 1));
  for (std::size_t i = 0; i < ls.size(); ++i) base[static_cast<std::size_t>(ls.m[i])] = w[i];

  Poly result{1};
  Poly power = base;
  for (int e = n;;) {
    if (e & 1) result = multiply(result, power);
    e >>= 1;
    if (e == 0) break;
    power = multiply(power, power);
  }
  result.resize(static_cast<std::size_t>(n * m_max + 1));
  return {n, std::move(result)};
}

ShellCounts naive_shell_counts(const LatticeSpectrum& ls, int n, Weight weight, std::uint64_t max_strings) {
  check_args(ls, n, weight);
  const auto w = weights(ls, weight);
  std::uint64_t dim = 0;
  for (int x : w) dim += static_cast<std::uint64_t>(x);
  std::uint64_t strings = 1;
  for (int k = 0; k < n; ++k) {
    if (dim != 0 && strings > max_strings / dim)
      throw ResourceLimitExceeded("enumeration of " + std::to_string(dim) + "^" + std::to_string(n) +
                                  " strings exceeds the limit");
    strings *= dim;
  }
  if (strings > max_strings) throw ResourceLimitExceeded("enumeration exceeds the limit");

  // one entry per basis state of a single copy: its lattice energy
  std::vector<std::int64_t> states;
  for (std::size_t i = 0; i < ls.size(); ++i)
    for (int k = 0; k < w[i]; ++k) states.push_back(ls.m[i]);

  ShellCounts out{n, std::vector<BigInt>(static_cast<std::size_t>(n * ls.m_max() + 1))};
  if (states.empty()) return out;
  std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
  std::vector<std::uint64_t> tally(out.counts.size(), 0);
  for (;;) {
    std::int64_t t = 0;
    for (auto k : idx) t += states[k];
    ++tally[static_cast<std::size_t>(t)];
    std::size_t pos = 0;
    while (pos < idx.size() && ++idx[pos] == states.size()) idx[pos++] = 0;
    if (pos == idx.size()) break;
  }
  for (std::size_t t = 0; t < tally.size(); ++t) out.counts[t] = static_cast<unsigned long>(tally[t]);
  return out;
}

}  // namespace detwork
