#include "detwork/protocol.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "detwork/bounds.hpp"
#include "detwork/errors.hpp"
#include "detwork/rate.hpp"
#include "detwork/shellcount.hpp"

namespace detwork {

namespace {

std::uint64_t checked_power(std::uint64_t base, int n, std::uint64_t limit, const char* what) {
  std::uint64_t c = 1;
  for (int k = 0; k < n; ++k) {
    if (base != 0 && c > limit / base) throw ResourceLimitExceeded(std::string(what) + " exceeds the limit");
    c *= base;
  }
  if (c > limit) throw ResourceLimitExceeded(std::string(what) + " exceeds the limit");
  return c;
}

std::int64_t lattice_energy(const LatticeSpectrum& ls, const BasisString& s) {
  std::int64_t t = 0;
  for (const auto& b : s) t += ls.m[static_cast<std::size_t>(b.level)];
  return t;
}

// Every string of n basis states drawn from `states`, in lexicographic order.
template <class F>
void for_each_string(const std::vector<BasisState>& states, int n, F&& f) {
  if (states.empty()) return;
  std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
  BasisString s(static_cast<std::size_t>(n), states.front());
  for (;;) {
    for (std::size_t k = 0; k < idx.size(); ++k) s[k] = states[idx[k]];
    f(s);
    std::size_t pos = idx.size();
    while (pos > 0 && ++idx[pos - 1] == states.size()) idx[--pos] = 0;
    if (pos == 0) break;
  }
}

std::vector<BasisState> basis_states(const LatticeSpectrum& ls, bool occupied_only) {
  std::vector<BasisState> out;
  for (std::size_t i = 0; i < ls.size(); ++i) {
    const int d = occupied_only ? ls.occupied[i] : ls.degeneracy[i];
    for (int k = 0; k < d; ++k) out.push_back({static_cast<int>(i), k});
  }
  return out;
}

// First `count` full-space strings of total lattice energy `target`, lexicographic.
class TargetGenerator {
 public:
  TargetGenerator(const LatticeSpectrum& ls, int n) : ls_(ls), n_(n), states_(basis_states(ls, false)) {
    reach_.resize(static_cast<std::size_t>(n) + 1);
    reach_[0] = {1};
    for (int r = 1; r <= n; ++r) {
      auto& cur = reach_[static_cast<std::size_t>(r)];
      const auto& prev = reach_[static_cast<std::size_t>(r - 1)];
      cur.assign(static_cast<std::size_t>(r * ls.m_max() + 1), 0);
      for (std::size_t e = 0; e < prev.size(); ++e)
        if (prev[e])
          for (auto m : ls.m) cur[e + static_cast<std::size_t>(m)] = 1;
    }
  }

  std::vector<BasisString> first(std::int64_t target, std::size_t count) const {
    std::vector<BasisString> out;
    BasisString cur;
    walk(target, count, cur, out);
    return out;
  }

 private:
  bool reachable(int r, std::int64_t e) const {
    const auto& v = reach_[static_cast<std::size_t>(r)];
    return e >= 0 && e < static_cast<std::int64_t>(v.size()) && v[static_cast<std::size_t>(e)];
  }

  void walk(std::int64_t rest, std::size_t count, BasisString& cur, std::vector<BasisString>& out) const {
    const int left = n_ - static_cast<int>(cur.size());
    if (left == 0) {
      if (rest == 0) out.push_back(cur);
      return;
    }
    for (const auto& b : states_) {
      if (out.size() >= count) return;
      const std::int64_t r = rest - ls_.m[static_cast<std::size_t>(b.level)];
      if (!reachable(left - 1, r)) continue;
      cur.push_back(b);
      walk(r, count, cur, out);
      cur.pop_back();
    }
  }

  const LatticeSpectrum& ls_;
  int n_;
  std::vector<BasisState> states_;
  std::vector<std::vector<char>> reach_;
};

ExplicitMap lexicographic_map(const LatticeSpectrum& ls, int n, std::int64_t shift) {
  std::map<std::int64_t, std::vector<BasisString>> by_shell;
  for_each_string(basis_states(ls, true), n,
                  [&](const BasisString& s) { by_shell[lattice_energy(ls, s)].push_back(s); });
  TargetGenerator gen(ls, n);
  ExplicitMap map;
  for (auto& [t, sources] : by_shell) {
    auto targets = gen.first(t - shift, sources.size());
    if (targets.size() != sources.size()) throw InvariantViolation("target shell smaller than its capacity count");
    for (std::size_t k = 0; k < sources.size(); ++k) map.emplace_back(std::move(sources[k]), std::move(targets[k]));
  }
  std::sort(map.begin(), map.end());
  return map;
}

// Compositions of n over the levels with nonzero weight, grouped by lattice
// energy, each with its number of strings.
using ShellBlocks = std::map<std::int64_t, std::vector<std::pair<Composition, BigInt>>>;

ShellBlocks composition_blocks(const LatticeSpectrum& ls, int n, const std::vector<int>& w,
                               const std::set<std::int64_t>* wanted) {
  std::vector<BigInt> fact(static_cast<std::size_t>(n) + 1, 1);
  for (int k = 1; k <= n; ++k) fact[static_cast<std::size_t>(k)] = fact[static_cast<std::size_t>(k) - 1] * k;
  std::vector<std::size_t> levels;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i] > 0) levels.push_back(i);

  ShellBlocks out;
  Composition c(ls.size(), 0);
  std::function<void(std::size_t, int, std::int64_t)> rec = [&](std::size_t pos, int left, std::int64_t t) {
    if (pos + 1 == levels.size()) {
      const std::size_t i = levels[pos];
      c[i] = left;
      const std::int64_t total = t + left * ls.m[i];
      if (!wanted || wanted->count(total)) {
        BigInt cnt = fact[static_cast<std::size_t>(n)];
        for (std::size_t j : levels) {
          cnt /= fact[static_cast<std::size_t>(c[j])];
          BigInt p;
          mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(w[j]), static_cast<unsigned long>(c[j]));
          cnt *= p;
        }
        out[total].emplace_back(c, cnt);
      }
      c[i] = 0;
      return;
    }
    const std::size_t i = levels[pos];
    for (int k = left; k >= 0; --k) {
      c[i] = k;
      rec(pos + 1, left - k, t + k * ls.m[i]);
    }
    c[i] = 0;
  };
  if (!levels.empty()) rec(0, n, 0);
  for (auto& [t, v] : out) std::sort(v.begin(), v.end());
  return out;
}

bool compositions_within(std::size_t levels, int n, std::uint64_t limit) {
  if (levels == 0) return true;
  return binomial(static_cast<unsigned long>(n) + levels - 1, levels - 1) <= limit;
}

std::vector<BlockTransfer> greedy_block_plan(const LatticeSpectrum& ls, int n, std::int64_t shift) {
  const ShellBlocks src = composition_blocks(ls, n, ls.occupied, nullptr);
  std::set<std::int64_t> wanted;
  for (const auto& [t, v] : src) wanted.insert(t - shift);
  const ShellBlocks dst = composition_blocks(ls, n, ls.degeneracy, &wanted);

  std::vector<BlockTransfer> plan;
  for (const auto& [t, sources] : src) {
    auto it = dst.find(t - shift);
    if (it == dst.end()) throw InvariantViolation("missing target shell in block plan");
    const auto& targets = it->second;
    std::size_t j = 0;
    BigInt room = targets.empty() ? BigInt(0) : targets[0].second;
    for (const auto& [comp, cnt] : sources) {
      BigInt left = cnt;
      while (sgn(left) > 0) {
        while (sgn(room) == 0) {
          if (++j >= targets.size()) throw InvariantViolation("block plan ran out of capacity");
          room = targets[j].second;
        }
        BigInt take = left < room ? left : room;
        plan.push_back({comp, targets[j].first, take});
        left -= take;
        room -= take;
      }
    }
  }
  return plan;
}

}  // namespace

ProtocolTable build_protocol(const LatticeSpectrum& ls, int n, std::int64_t shift, bool emit_explicit,
                             const ProtocolLimits& limits) {
  validate_lattice(ls);
  if (n < 1) throw InvalidArgument("copy count must be at least 1");
  if (shift < 0) throw InfeasibleShift("negative shift");
  const ShellCounts full = shell_counts(ls, n, Weight::full);
  const ShellCounts occ = shell_counts(ls, n, Weight::occupied);
  if (!shift_feasible(occ, full, shift))
    throw InfeasibleShift("shift " + std::to_string(shift) + " breaks the shell capacity at n=" + std::to_string(n));

  ProtocolTable pt;
  pt.n = n;
  pt.shift = shift;
  pt.lattice = ls;
  for (std::size_t t = 0; t < occ.counts.size(); ++t)
    if (sgn(occ.counts[t]) != 0)
      pt.shell_plan.push_back({static_cast<std::int64_t>(t), occ.counts[t], static_cast<std::int64_t>(t) - shift});

  if (compositions_within(ls.size(), n, limits.compositions)) pt.block_plan = greedy_block_plan(ls, n, shift);
  if (emit_explicit) {
    checked_power(static_cast<std::uint64_t>(ls.occupied_dimension()), n, limits.explicit_states,
                  "explicit map size");
    pt.explicit_map = lexicographic_map(ls, n, shift);
  }
  return pt;
}

namespace {

// Kuhn augmenting paths; returns false when some source stays unmatched.
bool match_all(const std::vector<std::vector<std::size_t>>& adj, std::size_t right, std::vector<std::size_t>& match_of_left) {
  constexpr std::size_t none = static_cast<std::size_t>(-1);
  std::vector<std::size_t> owner(right, none);
  std::vector<std::size_t> seen(right, none);
  std::function<bool(std::size_t, std::size_t)> augment = [&](std::size_t u, std::size_t stamp) {
    for (std::size_t v : adj[u]) {
      if (seen[v] == stamp) continue;
      seen[v] = stamp;
      if (owner[v] == none || augment(owner[v], stamp)) {
        owner[v] = u;
        return true;
      }
    }
    return false;
  };
  for (std::size_t u = 0; u < adj.size(); ++u) {
    // cheap pass first
    bool done = false;
    for (std::size_t v : adj[u])
      if (owner[v] == none) {
        owner[v] = u;
        done = true;
        break;
      }
    if (!done && !augment(u, u)) return false;
  }
  match_of_left.assign(adj.size(), none);
  for (std::size_t v = 0; v < right; ++v)
    if (owner[v] != none) match_of_left[owner[v]] = v;
  return true;
}

}  // namespace

LcmProtocol lcm_protocol(const LatticeSpectrum& ls, std::uint64_t max_states) {
  validate_lattice(ls);
  if (ls.m.front() != 0) throw NotApplicable("lcm construction needs the ground at lattice index 0");
  if (ls.occupied.front() > 0) throw NotApplicable("lcm construction needs an unoccupied ground level");
  const LcmPlan plan = lcm_plan(ls);
  const BigInt n_big = plan.K_S + 1;
  if (n_big > 100000) throw ResourceLimitExceeded("lcm construction needs too many copies");
  const int n = static_cast<int>(n_big.get_si());
  const std::int64_t shift = to_int64(plan.M_S, "lcm shift");

  LcmProtocol out;
  out.n = n;
  out.table = build_protocol(ls, n, shift, false);

  std::uint64_t states = 1;
  const auto occ_dim = static_cast<std::uint64_t>(ls.occupied_dimension());
  for (int k = 0; k < n && states <= max_states; ++k) states *= occ_dim;
  if (states > max_states) return out;

  std::vector<BasisString> sources;
  for_each_string(basis_states(ls, true), n, [&](const BasisString& s) { sources.push_back(s); });

  std::map<BasisString, std::size_t> target_ids;
  std::vector<BasisString> targets;
  std::vector<std::vector<std::size_t>> adj(sources.size());
  const auto occupied_levels = ls.occupied_levels();
  for (std::size_t u = 0; u < sources.size(); ++u) {
    const auto& s = sources[u];
    std::map<BasisState, std::vector<std::size_t>> positions;
    for (std::size_t k = 0; k < s.size(); ++k) positions[s[k]].push_back(k);
    // smallest level, then smallest sublevel, reaching its threshold
    std::optional<BasisState> star;
    for (std::size_t j : occupied_levels) {
      const auto& K = plan.K.at(j);
      for (int b = 0; b < ls.occupied[j] && !star; ++b) {
        auto it = positions.find({static_cast<int>(j), b});
        if (it != positions.end() && BigInt(static_cast<unsigned long>(it->second.size())) >= K)
          star = BasisState{static_cast<int>(j), b};
      }
      if (star) break;
    }
    if (!star) throw InvariantViolation("no symbol reaches its threshold");
    const auto& pos = positions[*star];
    const std::size_t demote = static_cast<std::size_t>(BigInt(plan.M_S / ls.m[static_cast<std::size_t>(star->level)]).get_si());
    // every choice of `demote` positions among `pos`
    std::vector<std::size_t> pick(demote);
    for (std::size_t k = 0; k < demote; ++k) pick[k] = k;
    for (;;) {
      BasisString t = s;
      for (auto k : pick) t[pos[k]] = BasisState{0, 0};
      auto [it, inserted] = target_ids.emplace(t, targets.size());
      if (inserted) targets.push_back(std::move(t));
      adj[u].push_back(it->second);
      std::size_t k = demote;
      while (k > 0 && pick[k - 1] == pos.size() - demote + k - 1) --k;
      if (k == 0) break;
      ++pick[k - 1];
      for (std::size_t r = k; r < demote; ++r) pick[r] = pick[r - 1] + 1;
    }
  }

  std::vector<std::size_t> match;
  if (!match_all(adj, targets.size(), match)) return out;
  ExplicitMap map;
  for (std::size_t u = 0; u < sources.size(); ++u) map.emplace_back(sources[u], targets[match[u]]);
  std::sort(map.begin(), map.end());
  out.table.explicit_map = std::move(map);
  out.realizes_injection = true;
  return out;
}

namespace {

Rational string_energy(const BasisString& s, std::span<const Rational> e) {
  Rational total = 0;
  for (const auto& b : s) total += e[static_cast<std::size_t>(b.level)];
  return total;
}

Rational composition_energy(const Composition& c, std::span<const Rational> e) {
  Rational total = 0;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i] != 0) total += e[i] * Rational(c[i]);
  return total;
}

std::int64_t composition_lattice(const Composition& c, const LatticeSpectrum& ls, int n) {
  if (c.size() != ls.size()) throw ProtocolViolation("composition has the wrong number of levels");
  std::int64_t t = 0;
  int copies = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] < 0) throw ProtocolViolation("negative composition entry");
    copies += c[i];
    t += c[i] * ls.m[i];
  }
  if (copies != n) throw ProtocolViolation("composition does not sum to the copy count");
  return t;
}

BigInt composition_strings(const Composition& c, const std::vector<int>& w) {
  int n = 0;
  for (int x : c) n += x;
  BigInt cnt;
  mpz_fac_ui(cnt.get_mpz_t(), static_cast<unsigned long>(n));
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] == 0) continue;
    BigInt f, p;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(c[i]));
    mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(w[i]), static_cast<unsigned long>(c[i]));
    cnt = cnt / f * p;
  }
  return cnt;
}

void check_string(const BasisString& s, const LatticeSpectrum& ls, int n, bool occupied) {
  if (static_cast<int>(s.size()) != n) throw ProtocolViolation("basis string has the wrong length");
  for (const auto& b : s) {
    if (b.level < 0 || static_cast<std::size_t>(b.level) >= ls.size() || b.sublevel < 0)
      throw ProtocolViolation("basis state out of range");
    const int limit = occupied ? ls.occupied[static_cast<std::size_t>(b.level)]
                               : ls.degeneracy[static_cast<std::size_t>(b.level)];
    if (b.sublevel >= limit) throw ProtocolViolation(occupied ? "source string leaves the occupied support"
                                                             : "target sublevel exceeds the degeneracy");
  }
}

}  // namespace

ProtocolReport verify_protocol(const ProtocolTable& pt, std::span<const Rational> e) {
  const auto& ls = pt.lattice;
  validate_lattice(ls);
  if (pt.n < 1 || pt.shift < 0) throw ProtocolViolation("bad copy count or shift");
  if (e.size() != ls.size()) throw InvalidArgument("one energy per lattice level is required");

  const ShellCounts full = shell_counts(ls, pt.n, Weight::full);
  const ShellCounts occ = shell_counts(ls, pt.n, Weight::occupied);
  std::set<std::int64_t> seen;
  for (const auto& st : pt.shell_plan) {
    if (st.t_out != st.t_in - pt.shift) throw ProtocolViolation("shell transfer does not move by the shift");
    if (!seen.insert(st.t_in).second) throw ProtocolViolation("shell listed twice");
    if (st.count != occ.at(st.t_in)) throw ProtocolViolation("shell count differs from the occupied count");
    if (st.count > full.at(st.t_out))
      throw ProtocolViolation("capacity exceeded at shell " + std::to_string(st.t_out));
  }
  for (std::size_t t = 0; t < occ.counts.size(); ++t)
    if (sgn(occ.counts[t]) != 0 && !seen.count(static_cast<std::int64_t>(t)))
      throw ProtocolViolation("occupied shell " + std::to_string(t) + " missing from the plan");

  const BigInt total = occ.total();
  std::map<Rational, BigInt> counts;
  if (pt.explicit_map) {
    std::set<BasisString> ins, outs;
    for (const auto& [in, out] : *pt.explicit_map) {
      check_string(in, ls, pt.n, true);
      check_string(out, ls, pt.n, false);
      if (!ins.insert(in).second) throw ProtocolViolation("source string listed twice");
      if (!outs.insert(out).second) throw ProtocolViolation("map is not injective");
      if (lattice_energy(ls, in) - lattice_energy(ls, out) != pt.shift)
        throw ProtocolViolation("transition does not release the shift");
      counts[string_energy(in, e) - string_energy(out, e)] += 1;
    }
    if (BigInt(static_cast<unsigned long>(ins.size())) != total)
      throw ProtocolViolation("map does not cover the occupied support");
  } else if (!pt.block_plan.empty()) {
    std::map<Composition, BigInt> used_from, used_to;
    for (const auto& b : pt.block_plan) {
      if (sgn(b.count) <= 0) throw ProtocolViolation("non-positive block count");
      const auto t_in = composition_lattice(b.from, ls, pt.n);
      const auto t_out = composition_lattice(b.to, ls, pt.n);
      if (t_in - t_out != pt.shift) throw ProtocolViolation("block transfer does not release the shift");
      used_from[b.from] += b.count;
      used_to[b.to] += b.count;
      counts[composition_energy(b.from, e) - composition_energy(b.to, e)] += b.count;
    }
    BigInt covered = 0;
    for (const auto& [c, k] : used_from) {
      if (k != composition_strings(c, ls.occupied)) throw ProtocolViolation("block plan misses occupied strings");
      covered += k;
    }
    if (covered != total) throw ProtocolViolation("block plan does not cover the occupied support");
    for (const auto& [c, k] : used_to)
      if (k > composition_strings(c, ls.degeneracy)) throw ProtocolViolation("block capacity exceeded");
  } else {
    for (std::size_t i = 0; i < ls.size(); ++i)
      if (e[i] != ls.energy(i))
        throw ProtocolViolation("table has no block detail; only its own lattice energies can be checked");
    counts[pt.work()] = total;
  }

  ProtocolReport r;
  r.work_counts = std::move(counts);
  r.states = total;
  r.deterministic = r.work_counts.size() == 1;
  r.min_work = r.work_counts.begin()->first;
  r.max_work = r.work_counts.rbegin()->first;
  Rational sum = 0;
  for (const auto& [w, k] : r.work_counts) sum += w * Rational(k);
  r.mean_work = sum / Rational(total);
  return r;
}

ProtocolReport verify_protocol(const ProtocolTable& pt, const Spectrum& s) {
  const auto e = normalize_ground(s).energies();
  return verify_protocol(pt, std::span<const Rational>(e));
}

template <class P>
WorkDistribution<P> simulate_tpm(const DiagonalState<P>& state, const ProtocolTable& pt,
                                 std::span<const Rational> e) {
  if (!pt.explicit_map) throw ProtocolViolation("simulation needs an explicit map");
  if (e.size() != pt.lattice.size()) throw InvalidArgument("one energy per lattice level is required");
  if (state.copies != pt.n) throw InvalidArgument("state and protocol copy counts differ");
  state.validate();
  std::map<BasisString, const BasisString*> lookup;
  for (const auto& [in, out] : *pt.explicit_map) lookup.emplace(in, &out);
  std::map<Rational, P> weights;
  for (const auto& [s, p] : state.populations) {
    if (detail::is_zero(p)) continue;
    auto it = lookup.find(s);
    if (it == lookup.end()) throw ProtocolViolation("populated string outside the protocol domain");
    weights[string_energy(s, e) - string_energy(*it->second, e)] += p;
  }
  return make_work_distribution(weights);
}

template <class P>
WorkDistribution<P> simulate_tpm(const DiagonalState<P>& state, const ProtocolTable& pt, const Spectrum& s) {
  const auto e = normalize_ground(s).energies();
  return simulate_tpm(state, pt, std::span<const Rational>(e));
}

template <class P>
DiagonalState<P> level_state(const std::vector<int>& occupied, const std::vector<P>& level_probabilities) {
  if (occupied.size() != level_probabilities.size()) throw InvalidArgument("one probability per level is required");
  DiagonalState<P> st;
  st.copies = 1;
  for (std::size_t i = 0; i < occupied.size(); ++i) {
    const P& p = level_probabilities[i];
    if (detail::is_zero(p)) continue;
    if (occupied[i] <= 0) throw InvalidArgument("probability on an unoccupied level");
    for (int k = 0; k < occupied[i]; ++k)
      st.populations[{BasisState{static_cast<int>(i), k}}] = p / P(occupied[i]);
  }
  st.validate();
  return st;
}

DiagonalState<Rational> uniform_state(const std::vector<int>& occupied) {
  long dim = 0;
  for (int d : occupied) dim += d;
  if (dim <= 0) throw InvalidArgument("empty support");
  std::vector<Rational> p;
  for (int d : occupied) {
    Rational q(d, dim);
    q.canonicalize();
    p.push_back(q);
  }
  return level_state(occupied, p);
}

template WorkDistribution<Rational> simulate_tpm(const DiagonalState<Rational>&, const ProtocolTable&,
                                                 std::span<const Rational>);
template WorkDistribution<double> simulate_tpm(const DiagonalState<double>&, const ProtocolTable&,
                                               std::span<const Rational>);
template WorkDistribution<Rational> simulate_tpm(const DiagonalState<Rational>&, const ProtocolTable&,
                                                 const Spectrum&);
template WorkDistribution<double> simulate_tpm(const DiagonalState<double>&, const ProtocolTable&, const Spectrum&);
template DiagonalState<Rational> level_state(const std::vector<int>&, const std::vector<Rational>&);
template DiagonalState<double> level_state(const std::vector<int>&, const std::vector<double>&);

}  // namespace detwork
