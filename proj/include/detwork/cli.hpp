#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "detwork/errors.hpp"

namespace detwork {

enum class Subcommand { rate, bounds, protocol, simulate, approx, figure, counts };
enum class Format { csv, kv_text, protocol_file };
enum class FigureKind { r100, rates_vs_n, gaussians };

/// Bad flag combination or value.
class UsageError : public Error {
 public:
  using Error::Error;
};

struct RunConfig {
  Subcommand subcommand = Subcommand::rate;
  std::string spectrum_path;
  std::string output_path;  // empty: standard output
  std::optional<Format> format;

  // rate / counts / protocol / approx / figure
  std::optional<int> n;
  std::optional<int> n_from, n_to;
  std::string weight = "full";

  // protocol
  std::optional<long long> shift;
  bool lcm = false;
  bool emit_mapping = false;

  // simulate
  std::string protocol_path;
  std::string populations;  // comma-separated level probabilities; empty: uniform

  // approx
  std::string delta;
  double confidence = 0.5;
  std::string ground = "pinned";  // or "split"
  std::string protocol_out;

  // figure
  FigureKind figure = FigureKind::r100;
  std::string eps2_from = "1.1", eps2_to = "3.0", step = "0.1";
  std::optional<int> n_max;
};

/// Parses "a..b" into (a, b). Throws UsageError.
std::pair<int, int> parse_n_range(const std::string& text);

/// Throws UsageError for inconsistent flags; called by run before any work.
void validate(const RunConfig& cfg);

/// Exit status: 0 ok, 1 usage or inapplicable request, 2 invalid spectrum,
/// 3 resource limit, 4 internal invariant violation.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace detwork
