#include "detwork/cli.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "detwork/approx.hpp"
#include "detwork/bounds.hpp"
#include "detwork/figures.hpp"
#include "detwork/io.hpp"
#include "detwork/protocol.hpp"
#include "detwork/rate.hpp"
#include "detwork/shellcount.hpp"
#include "detwork/spectrum.hpp"

namespace detwork {

std::pair<int, int> parse_n_range(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) throw UsageError("n range must look like 'a..b'");
  try {
    std::size_t p1 = 0, p2 = 0;
    const std::string a = text.substr(0, dots), b = text.substr(dots + 2);
    const int lo = std::stoi(a, &p1), hi = std::stoi(b, &p2);
    if (p1 != a.size() || p2 != b.size()) throw UsageError("n range must look like 'a..b'");
    if (lo < 1 || hi < lo) throw UsageError("n range needs 1 <= a <= b");
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw UsageError("n range must look like 'a..b'");
  }
}

namespace {

bool needs_spectrum(const RunConfig& c) {
  return !(c.subcommand == Subcommand::figure && c.figure == FigureKind::r100);
}

Format default_format(Subcommand s) {
  switch (s) {
    case Subcommand::rate:
    case Subcommand::figure:
    case Subcommand::counts:
      return Format::csv;
    case Subcommand::protocol:
      return Format::protocol_file;
    default:
      return Format::kv_text;
  }
}

void require_n(const RunConfig& c, const char* what) {
  if (!c.n) throw UsageError(std::string(what) + " needs --n");
  if (*c.n < 1) throw UsageError("--n must be at least 1");
}

}  // namespace

void validate(const RunConfig& c) {
  if (needs_spectrum(c) && c.spectrum_path.empty()) throw UsageError("--spectrum is required");
  const Format f = c.format.value_or(default_format(c.subcommand));
  switch (c.subcommand) {
    case Subcommand::rate:
      if (c.n.has_value() == c.n_from.has_value()) throw UsageError("rate needs exactly one of --n and --n-range");
      if (c.n && *c.n < 1) throw UsageError("--n must be at least 1");
      if (f != Format::csv) throw UsageError("rate writes csv only");
      break;
    case Subcommand::counts:
      require_n(c, "counts");
      if (c.weight != "full" && c.weight != "occupied") throw UsageError("--weight must be full or occupied");
      if (f != Format::csv) throw UsageError("counts writes csv only");
      break;
    case Subcommand::bounds:
      if (c.n && *c.n < 1) throw UsageError("--n must be at least 1");
      if (f != Format::kv_text) throw UsageError("bounds writes kv text only");
      break;
    case Subcommand::protocol:
      if (c.lcm && (c.n || c.shift)) throw UsageError("--lcm chooses n and the shift itself");
      if (!c.lcm) require_n(c, "protocol");
      if (c.shift && *c.shift < 0) throw UsageError("--shift must be non-negative");
      if (f == Format::csv) throw UsageError("protocol writes a protocol file or kv text");
      break;
    case Subcommand::simulate:
      if (c.protocol_path.empty()) throw UsageError("simulate needs --protocol");
      if (f != Format::kv_text) throw UsageError("simulate writes kv text only");
      break;
    case Subcommand::approx:
      if (c.delta.empty()) throw UsageError("approx needs --delta");
      if (!(c.confidence >= 0 && c.confidence < 1)) throw UsageError("--confidence must lie in [0, 1)");
      if (c.n && *c.n < 1) throw UsageError("--n must be at least 1");
      if (!c.protocol_out.empty() && !c.n) throw UsageError("--protocol-out needs --n");
      if (c.ground != "pinned" && c.ground != "split") throw UsageError("--ground must be pinned or split");
      if (f != Format::kv_text) throw UsageError("approx writes kv text only");
      break;
    case Subcommand::figure:
      if (f != Format::csv) throw UsageError("figure writes csv only");
      if (c.figure == FigureKind::r100) require_n(c, "figure r100");
      if (c.figure == FigureKind::gaussians) require_n(c, "figure gaussians");
      if (c.figure == FigureKind::rates_vs_n && (!c.n_max || *c.n_max < 1))
        throw UsageError("figure rates_vs_n needs --n-max >= 1");
      break;
  }
}

namespace {

Rational flag_rational(const std::string& text, const char* flag) {
  try {
    return parse_rational(text);
  } catch (const InvalidArgument& e) {
    throw UsageError(std::string(flag) + ": " + e.what());
  }
}

std::string rate_csv(const Spectrum& s, int lo, int hi) {
  Table t{{"n", "shift", "work_total", "rate", "rate_decimal"}, {}};
  for (const auto& r : rate_sweep(s, lo, hi))
    t.rows.push_back({std::to_string(r.n), std::to_string(r.shift), to_string(r.work_total), to_string(r.rate),
                      to_decimal(r.rate)});
  return to_csv(t);
}

std::string bounds_kv(const Spectrum& s, std::optional<int> n) {
  const BoundsReport b = bounds_report(s, n);
  KeyValues kv;
  kv.emplace_back("label", s.label());
  kv.emplace_back("eps_min", to_string(b.eps_min_bound));
  kv.emplace_back("eps_min_decimal", to_decimal(b.eps_min_bound));
  kv.emplace_back("ergotropy_bound", to_decimal(b.ergotropy.value));
  kv.emplace_back("ergotropy_bound_source", b.ergotropy.note);
  kv.emplace_back("beta_hat", b.ergotropy.root ? to_decimal(b.ergotropy.root->beta) : "none");
  kv.emplace_back("beta_hat_residual", b.ergotropy.root ? to_decimal(b.ergotropy.root->residual, 6) : "none");
  kv.emplace_back("large_beta_limit", to_decimal(b.ergotropy.limit_value));
  kv.emplace_back("degenerate_support", b.degenerate_support ? "true" : "false");
  if (b.lcm) {
    kv.emplace_back("M_S", to_string(b.lcm->M_S));
    std::string ks;
    for (const auto& [i, K] : b.lcm->K) ks += (ks.empty() ? "" : ";") + std::to_string(i) + ":" + to_string(K);
    kv.emplace_back("K", ks);
    kv.emplace_back("K_S", to_string(b.lcm->K_S));
    kv.emplace_back("e_frak", to_string(b.lcm->e_frak));
    kv.emplace_back("e_frak_decimal", to_decimal(b.lcm->e_frak));
    kv.emplace_back("lcm_lower", to_string(b.lower->lcm_lower));
    kv.emplace_back("lcm_lower_decimal", to_decimal(b.lower->lcm_lower));
    kv.emplace_back("harmonic_lower", b.lower->harmonic_lower ? to_string(*b.lower->harmonic_lower) : "none");
    kv.emplace_back("harmonic_lower_decimal",
                    b.lower->harmonic_lower ? to_decimal(*b.lower->harmonic_lower) : "none");
    if (b.lower->finite_n_lower) {
      kv.emplace_back("n", std::to_string(*n));
      kv.emplace_back("finite_n_lower", to_string(*b.lower->finite_n_lower));
      kv.emplace_back("finite_n_lower_decimal", to_decimal(*b.lower->finite_n_lower));
    }
  } else {
    kv.emplace_back("lcm_lower", "none");
    kv.emplace_back("harmonic_lower", "none");
  }
  if (b.clt) {
    kv.emplace_back("clt_estimate", to_decimal(b.clt->value));
    kv.emplace_back("mu0", to_decimal(b.clt->moments.mu0));
    kv.emplace_back("sigma0_sq", to_decimal(b.clt->moments.sigma0_sq));
    kv.emplace_back("mu_plus", to_decimal(b.clt->moments.mu_plus));
    kv.emplace_back("sigma_plus_sq", to_decimal(b.clt->moments.sigma_plus_sq));
    if (!b.clt->note.empty()) kv.emplace_back("clt_note", b.clt->note);
  } else {
    kv.emplace_back("clt_estimate", "none");
    kv.emplace_back("clt_note", b.clt_note);
  }
  return to_kv_text(kv);
}

KeyValues protocol_summary(const ProtocolTable& pt, const ProtocolReport& rep) {
  KeyValues kv;
  kv.emplace_back("n", std::to_string(pt.n));
  kv.emplace_back("shift", std::to_string(pt.shift));
  kv.emplace_back("work_total", to_string(pt.work()));
  kv.emplace_back("rate", to_string(pt.work() / Rational(pt.n)));
  kv.emplace_back("states", to_string(rep.states));
  kv.emplace_back("deterministic", rep.deterministic ? "true" : "false");
  kv.emplace_back("explicit_map", pt.explicit_map ? std::to_string(pt.explicit_map->size()) : "none");
  kv.emplace_back("shells", std::to_string(pt.shell_plan.size()));
  kv.emplace_back("blocks", std::to_string(pt.block_plan.size()));
  return kv;
}

std::string simulate_kv(const Spectrum& s, const RunConfig& c) {
  const ProtocolTable pt = protocol_from_json(read_file(c.protocol_path));
  const LatticeSpectrum ls = to_lattice(s);
  if (ls.size() != pt.lattice.size()) throw UsageError("spectrum and protocol have different level counts");
  std::vector<Rational> level_p;
  if (c.populations.empty()) {
    level_p.assign(s.size(), 0);
    const Rational dim = s.occupied_dimension();
    for (std::size_t i = 0; i < s.size(); ++i) level_p[i] = Rational(s.level(i).occupied) / dim;
  } else {
    std::stringstream ss(c.populations);
    std::string item;
    while (std::getline(ss, item, ',')) level_p.push_back(flag_rational(item, "--populations"));
    if (level_p.size() != s.size()) throw UsageError("--populations needs one probability per level");
  }
  DiagonalState<Rational> base;
  try {
    base = level_state(s.occupied_dims(), level_p);
  } catch (const InvalidArgument& e) {
    throw UsageError(std::string("--populations: ") + e.what());
  }
  const auto state = tensor_power_state(base, pt.n);
  const auto dist = simulate_tpm(state, pt, s);
  KeyValues kv;
  kv.emplace_back("n", std::to_string(pt.n));
  std::string atoms;
  for (const auto& [w, p] : dist.atoms) atoms += (atoms.empty() ? "" : ";") + to_string(w) + ":" + to_string(p);
  kv.emplace_back("atoms", atoms);
  kv.emplace_back("mean", to_string(dist.mean));
  kv.emplace_back("mean_decimal", to_decimal(dist.mean));
  kv.emplace_back("variance", to_string(dist.variance));
  kv.emplace_back("deterministic", dist.deterministic() ? "true" : "false");
  return to_kv_text(kv);
}

std::string approx_kv(const Spectrum& s, const RunConfig& c) {
  const Rational delta = flag_rational(c.delta, "--delta");
  const ApproxPlan p = plan_bounded_fluctuation(s, delta, c.confidence,
                                                c.ground == "split" ? GroundMode::split : GroundMode::pinned);
  KeyValues kv;
  kv.emplace_back("delta", to_string(p.delta));
  kv.emplace_back("ground", c.ground);
  kv.emplace_back("d_star", std::to_string(p.d_star));
  kv.emplace_back("unit", to_string(p.snapped.unit));
  std::string ms, occ;
  for (std::size_t i = 0; i < p.snapped.size(); ++i) {
    ms += (i ? ";" : "") + std::to_string(p.snapped.m[i]);
    occ += (i ? ";" : "") + std::to_string(p.snapped.occupied[i]);
  }
  kv.emplace_back("snapped_m", ms);
  kv.emplace_back("snapped_occupied", occ);
  kv.emplace_back("e_frak", to_string(p.e_frak));
  kv.emplace_back("e_frak_decimal", to_decimal(p.e_frak));
  kv.emplace_back("confidence", to_decimal(p.c));
  kv.emplace_back("A", to_decimal(p.A_const, 8));
  kv.emplace_back("log10_n_min", std::isfinite(p.log10_n_min) ? to_decimal(p.log10_n_min, 8) : "-inf");
  kv.emplace_back("target_work", to_decimal(p.target));
  kv.emplace_back("band", to_string(p.band));
  if (!p.warning.empty()) kv.emplace_back("warning", p.warning);
  if (c.n) {
    const auto res = bounded_fluctuation_protocol(p, *c.n, c.emit_mapping);
    const auto& b = res.band;
    kv.emplace_back("n", std::to_string(*c.n));
    kv.emplace_back("shift", std::to_string(res.table.shift));
    kv.emplace_back("positive_shift", res.positive_shift ? "true" : "false");
    kv.emplace_back("w_prime", to_string(b.w_prime));
    kv.emplace_back("w_prime_decimal", to_decimal(b.w_prime));
    kv.emplace_back("min_work", to_decimal(b.min_work));
    kv.emplace_back("max_work", to_decimal(b.max_work));
    kv.emplace_back("mean_work", to_decimal(b.mean_work));
    kv.emplace_back("spread", to_decimal(b.spread));
    kv.emplace_back("band_2delta_around_w_prime", b.offending.empty() ? "pass" : "fail");
    kv.emplace_back("band_4delta_spread", b.spread <= p.band ? "pass" : "fail");
    kv.emplace_back("band_pass", b.pass ? "true" : "false");
    if (!b.structural_error.empty()) kv.emplace_back("structural_error", b.structural_error);
    if (!c.protocol_out.empty()) write_file_atomic(c.protocol_out, protocol_to_json(res.table));
  }
  return to_kv_text(kv);
}

std::string execute(const RunConfig& c) {
  std::optional<Spectrum> spec;
  if (needs_spectrum(c)) spec = parse_spectrum(read_file(c.spectrum_path));
  const Format f = c.format.value_or(default_format(c.subcommand));
  switch (c.subcommand) {
    case Subcommand::rate:
      return c.n ? rate_csv(*spec, *c.n, *c.n) : rate_csv(*spec, *c.n_from, *c.n_to);
    case Subcommand::counts: {
      const auto w = c.weight == "full" ? Weight::full : Weight::occupied;
      const ShellCounts sc = shell_counts(to_lattice(*spec), *c.n, w);
      Table t{{"t", "count"}, {}};
      for (std::size_t k = 0; k < sc.counts.size(); ++k)
        if (sgn(sc.counts[k]) != 0) t.rows.push_back({std::to_string(k), to_string(sc.counts[k])});
      return to_csv(t);
    }
    case Subcommand::bounds:
      return bounds_kv(*spec, c.n);
    case Subcommand::protocol: {
      const LatticeSpectrum ls = to_lattice(*spec);
      ProtocolTable pt;
      KeyValues extra;
      if (c.lcm) {
        LcmProtocol lp = lcm_protocol(ls);
        pt = std::move(lp.table);
        extra.emplace_back("realizes_injection", lp.realizes_injection ? "true" : "false");
      } else {
        const std::int64_t shift = c.shift ? *c.shift : max_det_shift(ls, *c.n);
        pt = build_protocol(ls, *c.n, shift, c.emit_mapping);
      }
      if (f == Format::protocol_file) return protocol_to_json(pt);
      KeyValues kv = protocol_summary(pt, verify_protocol(pt, *spec));
      kv.insert(kv.end(), extra.begin(), extra.end());
      return to_kv_text(kv);
    }
    case Subcommand::simulate:
      return simulate_kv(*spec, c);
    case Subcommand::approx:
      return approx_kv(*spec, c);
    case Subcommand::figure:
      switch (c.figure) {
        case FigureKind::r100:
          return to_csv(figure_r100(flag_rational(c.eps2_from, "--eps2-from"), flag_rational(c.eps2_to, "--eps2-to"),
                                    flag_rational(c.step, "--step"), *c.n));
        case FigureKind::rates_vs_n:
          return to_csv(figure_rates_vs_n(*spec, *c.n_max));
        case FigureKind::gaussians:
          return to_csv(figure_gaussians(*spec, *c.n));
      }
  }
  throw InvariantViolation("unknown subcommand");
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    validate(cfg);
    const std::string body = execute(cfg);
    if (cfg.output_path.empty())
      out << body;
    else
      write_file_atomic(cfg.output_path, body);
    return 0;
  } catch (const InvalidSpectrum& e) {
    err << "error: invalid spectrum: " << e.what() << "\n";
    return 2;
  } catch (const ResourceLimitExceeded& e) {
    err << "error: resource limit: " << e.what() << "\n";
    return 3;
  } catch (const InvariantViolation& e) {
    err << "error: internal invariant violated: " << e.what() << "\n";
    return 4;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: internal failure: " << e.what() << "\n";
    return 4;
  }
}

}  // namespace detwork
