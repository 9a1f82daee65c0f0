#include "detwork/approx.hpp"

#include <algorithm>
#include <cmath>

#include "detwork/bounds.hpp"
#include "detwork/errors.hpp"
#include "detwork/rate.hpp"

namespace detwork {

ApproxPlan snap_to_lattice(const Spectrum& source, const Rational& delta, GroundMode ground) {
  if (!source.normalized()) throw InvalidArgument("snapping needs a spectrum with ground energy 0");
  if (sgn(delta) <= 0) throw InvalidArgument("delta must be positive");
  for (std::size_t i = 1; i < source.size(); ++i)
    if (delta >= source.level(i).energy - source.level(i - 1).energy)
      throw InvalidArgument("delta must be smaller than every level gap");

  ApproxPlan p(source);
  p.delta = delta;
  p.ground = ground;
  for (const auto& l : source.levels()) p.d_star = std::max(p.d_star, l.degeneracy);
  p.snapped.unit = delta / Rational(p.d_star);
  std::size_t first = 0;
  if (ground == GroundMode::pinned) {
    p.snapped.m.push_back(0);
    p.snapped.degeneracy.push_back(source.level(0).degeneracy);
    p.snapped.occupied.push_back(source.level(0).occupied);
    p.origin.push_back(0);
    first = 1;
  }
  for (std::size_t i = first; i < source.size(); ++i) {
    const auto& l = source.level(i);
    const std::int64_t base = to_int64(floor_of(l.energy / p.snapped.unit), "snapped index");
    for (int j = 0; j < l.degeneracy; ++j) {
      p.snapped.m.push_back(base + j + 1);
      p.snapped.degeneracy.push_back(1);
      p.snapped.occupied.push_back(j < l.occupied ? 1 : 0);
      p.origin.push_back(i);
    }
  }
  validate_lattice(p.snapped);
  p.band = 4 * delta;
  if (!source.ground_occupied()) {
    Rational inv = 0;
    for (const auto& l : source.levels())
      if (l.occupied > 0) inv += Rational(l.occupied) / l.energy;
    p.e_frak = 1 / inv;
  }
  return p;
}

ApproxPlan plan_bounded_fluctuation(const Spectrum& source, const Rational& delta, double c, GroundMode ground) {
  if (source.ground_occupied()) throw NotApplicable("bounded-fluctuation protocols need an unoccupied ground level");
  if (!(c >= 0 && c < 1)) throw InvalidArgument("confidence c must lie in [0, 1)");
  ApproxPlan p = snap_to_lattice(source, delta, ground);
  p.c = c;
  const double supp = static_cast<double>(source.occupied_levels().size());
  const double k = p.d_star * supp;  // d* |S|
  const double eps_max = to_double(source.levels().back().energy);
  const double log10_delta = std::log10(to_double(delta));
  if (c == 0) {
    p.A_const = 0;
    p.n_min = 0;
    p.log10_A = p.log10_n_min = -INFINITY;
  } else {
    p.log10_A = std::log10(c / (1 - c)) + std::log10(k) + (k - 1) * std::log10(p.d_star * eps_max + 1);
    p.log10_n_min = p.log10_A + (1 - k) * log10_delta;
    p.A_const = std::pow(10.0, p.log10_A);
    p.n_min = std::pow(10.0, p.log10_n_min);
  }
  p.target = std::max(c * to_double(p.e_frak) - 2 * to_double(delta), 0.0);
  if (p.log10_n_min > 15) {
    p.astronomical = true;
    p.warning = "guaranteed copy count is about 10^" + to_decimal(p.log10_n_min, 4) +
                "; use verify_band at the chosen n instead";
  }
  return p;
}

namespace {

std::string describe(const BasisString& s) {
  std::string out = "[";
  for (std::size_t k = 0; k < s.size(); ++k)
    out += (k ? " " : "") + std::to_string(s[k].level) + ":" + std::to_string(s[k].sublevel);
  return out + "]";
}

std::string describe(const Composition& c) {
  std::string out = "(";
  for (std::size_t k = 0; k < c.size(); ++k) out += (k ? "," : "") + std::to_string(c[k]);
  return out + ")";
}

}  // namespace

BandReport verify_band(const ProtocolTable& pt, const Spectrum& source, const Rational& w_prime,
                       const Rational& delta) {
  BandReport r;
  r.w_prime = w_prime;
  r.delta = delta;
  const Spectrum ns = normalize_ground(source);
  const auto& ls = pt.lattice;

  // lattice level -> highest source level not above it
  std::vector<Rational> e(ls.size());
  for (std::size_t i = 0; i < ls.size(); ++i) {
    const Rational snapped = ls.energy(i);
    std::size_t g = 0;
    while (g + 1 < ns.size() && ns.level(g + 1).energy <= snapped) ++g;
    e[i] = ns.level(g).energy;
    const Rational dev = abs(snapped - e[i]);
    if (dev > r.max_level_deviation) r.max_level_deviation = dev;
  }

  try {
    verify_protocol(pt, std::span<const Rational>(e));
  } catch (const Error& err) {
    r.structural_error = err.what();
  }

  const Rational n = pt.n;
  const Rational limit = 2 * delta;
  bool first = true;
  Rational weighted = 0;
  BigInt states = 0;
  auto visit = [&](const Rational& total_work, const BigInt& count, const std::string& what) {
    const Rational w = total_work / n;
    if (first || w < r.min_work) r.min_work = w;
    if (first || w > r.max_work) r.max_work = w;
    first = false;
    weighted += w * Rational(count);
    states += count;
    if (abs(w - w_prime) > limit && r.offending.size() < 20)
      r.offending.push_back(what + " per-copy work " + to_decimal(w) + " outside " + to_decimal(w_prime) + " +- " +
                            to_decimal(limit));
  };
  auto energy_of = [&](const BasisString& s) {
    Rational t = 0;
    for (const auto& b : s) t += e.at(static_cast<std::size_t>(b.level));
    return t;
  };
  auto comp_energy = [&](const Composition& c) {
    Rational t = 0;
    for (std::size_t i = 0; i < c.size() && i < e.size(); ++i) t += e[i] * Rational(c[i]);
    return t;
  };

  if (pt.explicit_map) {
    for (const auto& [in, out] : *pt.explicit_map)
      visit(energy_of(in) - energy_of(out), 1, describe(in) + " -> " + describe(out));
  } else if (!pt.block_plan.empty()) {
    for (const auto& b : pt.block_plan)
      visit(comp_energy(b.from) - comp_energy(b.to), b.count, describe(b.from) + " -> " + describe(b.to));
  } else if (r.structural_error.empty()) {
    visit(pt.work(), 1, "shell plan");
  }
  if (sgn(states) > 0) r.mean_work = weighted / Rational(states);
  r.spread = r.max_work - r.min_work;
  r.pass = !first && r.structural_error.empty() && r.offending.empty() && abs(r.mean_work - w_prime) <= limit &&
           r.spread <= 2 * limit;
  return r;
}

BoundedFluctuationResult bounded_fluctuation_protocol(const ApproxPlan& plan, int n, bool emit_explicit) {
  if (plan.source.ground_occupied()) throw NotApplicable("bounded-fluctuation protocols need an unoccupied ground level");
  BoundedFluctuationResult out;
  const std::int64_t shift = max_det_shift(plan.snapped, n);
  out.positive_shift = shift > 0;
  out.table = build_protocol(plan.snapped, n, shift, emit_explicit);
  const Rational w_prime = out.table.work() / Rational(n);
  out.band = verify_band(out.table, plan.source, w_prime, plan.delta);
  return out;
}

}  // namespace detwork
