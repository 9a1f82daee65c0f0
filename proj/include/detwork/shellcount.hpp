#pragma once

#include <cstdint>
#include <vector>

#include "detwork/rational.hpp"
#include "detwork/spectrum.hpp"

namespace detwork {

enum class Weight { full, occupied };

/// Number of n-copy basis states per total lattice energy t in [0, n*m_max].
struct ShellCounts {
  int n = 0;
  std::vector<BigInt> counts;

  const BigInt& at(std::int64_t t) const;  // zero outside the stored range
  BigInt total() const;
  std::int64_t first_nonzero() const;  // -1 when all zero
  std::int64_t last_nonzero() const;
  bool operator==(const ShellCounts&) const = default;
};

inline constexpr std::int64_t kDefaultMaxShellLength = 10'000'000;
inline constexpr std::uint64_t kDefaultMaxEnumeration = 10'000'000;

/// Coefficients of (sum_i w_i z^{m_i})^n with w_i the degeneracy (full) or
/// the occupied dimension (occupied). Throws ResourceLimitExceeded when
/// n*m_max + 1 exceeds max_length.
ShellCounts shell_counts(const LatticeSpectrum& ls, int n, Weight weight,
                         std::int64_t max_length = kDefaultMaxShellLength);

/// Same result by enumerating every weighted index string. Throws
/// ResourceLimitExceeded when D^n exceeds max_strings.
ShellCounts naive_shell_counts(const LatticeSpectrum& ls, int n, Weight weight,
                               std::uint64_t max_strings = kDefaultMaxEnumeration);

}  // namespace detwork
