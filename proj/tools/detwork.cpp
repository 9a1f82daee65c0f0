// detwork: exact deterministic work extraction from n copies of a state.

#include <CLI11.hpp>

#include <iostream>

#include "detwork/cli.hpp"

namespace {

void add_output(CLI::App* app, detwork::RunConfig& c) {
  app->add_option("-o,--output", c.output_path, "Output file (default: standard output)");
}

void add_spectrum(CLI::App* app, detwork::RunConfig& c, bool required = true) {
  auto* opt = app->add_option("-s,--spectrum", c.spectrum_path, "Spectrum JSON file");
  if (required) opt->required();
}

}  // namespace

int main(int argc, char** argv) {
  using detwork::RunConfig;
  RunConfig c;
  CLI::App app{"Exact deterministic work extraction from n copies of a state"};
  app.require_subcommand(1);

  std::string n_range;
  std::string format;

  auto* rate = app.add_subcommand("rate", "Maximum deterministic work per copy as CSV");
  add_spectrum(rate, c);
  rate->add_option("--n", c.n, "Single copy count");
  rate->add_option("--n-range", n_range, "Copy counts a..b");
  add_output(rate, c);

  auto* bounds = app.add_subcommand("bounds", "Upper and lower bounds as key=value text");
  add_spectrum(bounds, c);
  bounds->add_option("--n", c.n, "Copy count for the finite-n lower bound");
  add_output(bounds, c);

  auto* protocol = app.add_subcommand("protocol", "Build an extraction protocol");
  add_spectrum(protocol, c);
  protocol->add_option("--n", c.n, "Copy count");
  protocol->add_option("--shift", c.shift, "Lattice shift (default: the largest feasible)");
  protocol->add_flag("--lcm", c.lcm, "Use the lcm construction with its own n and shift");
  protocol->add_flag("--emit-mapping", c.emit_mapping, "Include the explicit basis-string map");
  protocol->add_option("--format", format, "protocol-file (default) or kv-text");
  add_output(protocol, c);

  auto* simulate = app.add_subcommand("simulate", "Two-point-measurement work law of a product state");
  add_spectrum(simulate, c);
  simulate->add_option("--protocol", c.protocol_path, "Protocol file with an explicit map")->required();
  simulate->add_option("--populations", c.populations, "Comma-separated level probabilities (default: uniform)");
  add_output(simulate, c);

  auto* approx = app.add_subcommand("approx", "Bounded-fluctuation protocol for an arbitrary spectrum");
  add_spectrum(approx, c);
  approx->add_option("--delta", c.delta, "Snapping tolerance")->required();
  approx->add_option("--n", c.n, "Copy count for the protocol and band check");
  approx->add_option("--confidence", c.confidence, "Fraction c in [0,1) of the guaranteed work");
  approx->add_option("--ground", c.ground, "pinned (ground kept at 0) or split (ground snapped like other levels)");
  approx->add_option("--protocol-out", c.protocol_out, "Write the protocol file here");
  approx->add_flag("--emit-mapping", c.emit_mapping, "Include the explicit map in the protocol");
  add_output(approx, c);

  auto* figure = app.add_subcommand("figure", "Figure data as CSV");
  std::string kind;
  figure->add_option("kind", kind, "r100, rates_vs_n or gaussians")
      ->required()
      ->check(CLI::IsMember({"r100", "rates_vs_n", "gaussians"}));
  add_spectrum(figure, c, false);
  figure->add_option("--eps2-from", c.eps2_from, "r100: first eps2");
  figure->add_option("--eps2-to", c.eps2_to, "r100: last eps2");
  figure->add_option("--step", c.step, "r100: eps2 step");
  figure->add_option("--n", c.n, "Copy count");
  figure->add_option("--n-max", c.n_max, "rates_vs_n: largest n");
  add_output(figure, c);

  auto* counts = app.add_subcommand("counts", "Shell counts as CSV");
  add_spectrum(counts, c);
  counts->add_option("--n", c.n, "Copy count");
  counts->add_option("--weight", c.weight, "full or occupied");
  add_output(counts, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (rate->parsed()) {
      c.subcommand = detwork::Subcommand::rate;
      if (!n_range.empty()) {
        auto [lo, hi] = detwork::parse_n_range(n_range);
        c.n_from = lo;
        c.n_to = hi;
      }
    } else if (bounds->parsed()) {
      c.subcommand = detwork::Subcommand::bounds;
    } else if (protocol->parsed()) {
      c.subcommand = detwork::Subcommand::protocol;
      if (format == "kv-text") c.format = detwork::Format::kv_text;
      else if (format == "protocol-file") c.format = detwork::Format::protocol_file;
      else if (!format.empty()) throw detwork::UsageError("--format must be protocol-file or kv-text");
    } else if (simulate->parsed()) {
      c.subcommand = detwork::Subcommand::simulate;
    } else if (approx->parsed()) {
      c.subcommand = detwork::Subcommand::approx;
    } else if (figure->parsed()) {
      c.subcommand = detwork::Subcommand::figure;
      c.figure = kind == "r100"         ? detwork::FigureKind::r100
                 : kind == "rates_vs_n" ? detwork::FigureKind::rates_vs_n
                                        : detwork::FigureKind::gaussians;
    } else {
      c.subcommand = detwork::Subcommand::counts;
    }
  } catch (const detwork::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return detwork::run(c, std::cout, std::cerr);
}
