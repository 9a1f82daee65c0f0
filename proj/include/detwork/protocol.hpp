#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "detwork/rational.hpp"
#include "detwork/spectrum.hpp"
#include "detwork/state.hpp"

namespace detwork {

/// `count` occupied states of total lattice energy t_in sent to shell t_out.
struct ShellTransfer {
  std::int64_t t_in = 0;
  BigInt count;
  std::int64_t t_out = 0;
};

/// Level-occupation vector over the lattice levels (entry i = copies in level i).
using Composition = std::vector<int>;

/// `count` occupied strings of composition `from` sent to strings of composition `to`.
struct BlockTransfer {
  Composition from;
  Composition to;
  BigInt count;
};

using ExplicitMap = std::vector<std::pair<BasisString, BasisString>>;

/// Basis-permutation witness for deterministic extraction of shift*unit
/// from n copies. Defined on the occupied support only.
struct ProtocolTable {
  int n = 0;
  std::int64_t shift = 0;
  LatticeSpectrum lattice;
  std::vector<ShellTransfer> shell_plan;
  std::vector<BlockTransfer> block_plan;  // empty when over the composition limit
  std::optional<ExplicitMap> explicit_map;

  Rational work() const { return lattice.unit * Rational(shift); }
};

struct ProtocolLimits {
  std::uint64_t explicit_states = 1'000'000;  // occupied strings
  std::uint64_t compositions = 2'000'000;     // per side, across all shells
};

/// Throws InfeasibleShift when the shift breaks the shell-capacity criterion,
/// ResourceLimitExceeded when an explicit map is requested over the limit.
ProtocolTable build_protocol(const LatticeSpectrum& ls, int n, std::int64_t shift, bool emit_explicit,
                             const ProtocolLimits& limits = {});

struct LcmProtocol {
  int n = 0;
  ProtocolTable table;
  /// True when the explicit map was produced by demoting copies of the most
  /// repeated occupied sublevel to the ground; false when the state space is
  /// too large and the table is a counting certificate at the same shift.
  bool realizes_injection = false;
};

/// Construction with n = K_S + 1 copies and work M_S * unit.
/// Throws NotApplicable when the ground is occupied or m[0] != 0.
LcmProtocol lcm_protocol(const LatticeSpectrum& ls, std::uint64_t max_states = 20'000);

struct ProtocolReport {
  std::map<Rational, BigInt> work_counts;  // distinct work values with state multiplicities
  BigInt states;
  bool deterministic = false;
  Rational min_work;
  Rational max_work;
  Rational mean_work;  // uniform over occupied states
};

/// Recomputes every transition's work with `level_energies[i]` the energy of
/// lattice level i. Throws ProtocolViolation on structural defects
/// (non-injective or non-covering map, capacity breach, wrong energies).
ProtocolReport verify_protocol(const ProtocolTable& pt, std::span<const Rational> level_energies);

/// Same, with energies taken from a spectrum that has one level per lattice level.
ProtocolReport verify_protocol(const ProtocolTable& pt, const Spectrum& s);

/// Two-point-measurement work law of `state` under the explicit map.
/// Throws ProtocolViolation when a populated string is outside the map's domain.
template <class P>
WorkDistribution<P> simulate_tpm(const DiagonalState<P>& state, const ProtocolTable& pt,
                                 std::span<const Rational> level_energies);

template <class P>
WorkDistribution<P> simulate_tpm(const DiagonalState<P>& state, const ProtocolTable& pt, const Spectrum& s);

/// Single-copy state spreading each level's probability evenly over its
/// occupied sublevels. Level probabilities must sum to 1.
template <class P>
DiagonalState<P> level_state(const std::vector<int>& occupied, const std::vector<P>& level_probabilities);

/// Uniform single-copy state on the occupied support.
DiagonalState<Rational> uniform_state(const std::vector<int>& occupied);

}  // namespace detwork
