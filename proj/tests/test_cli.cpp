#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "detwork/cli.hpp"
#include "detwork/io.hpp"

using namespace detwork;
namespace fs = std::filesystem;

namespace {

const std::string data = DETWORK_TEST_DATA;

struct Outcome {
  int code;
  std::string out, err;
};

Outcome invoke(const RunConfig& c) {
  std::ostringstream out, err;
  const int code = run(c, out, err);
  return {code, out.str(), err.str()};
}

RunConfig config(Subcommand sub, const std::string& spectrum = data + "/ratio2.json") {
  RunConfig c;
  c.subcommand = sub;
  c.spectrum_path = spectrum;
  return c;
}

fs::path scratch_dir() {
  fs::path p = fs::temp_directory_path() / ("detwork-cli-test-" + std::to_string(::getpid()));
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("rate csv") {
  RunConfig c = config(Subcommand::rate);
  c.n_from = 1;
  c.n_to = 3;
  const Outcome o = invoke(c);
  CHECK(o.code == 0);
  CHECK(o.out ==
        "n,shift,work_total,rate,rate_decimal\n"
        "1,0,0,0,0\n"
        "2,2,2,1,1\n"
        "3,4,4,4/3,1.3333333333333333333\n");
}

TEST_CASE("parse_n_range") {
  CHECK(parse_n_range("1..12") == std::pair{1, 12});
  CHECK_THROWS_AS(parse_n_range("3..1"), UsageError);
  CHECK_THROWS_AS(parse_n_range("x"), UsageError);
  CHECK_THROWS_AS(parse_n_range("0..4"), UsageError);
}

TEST_CASE("exit codes") {
  RunConfig usage = config(Subcommand::rate);
  CHECK(invoke(usage).code == 1);
  usage.n = 2;
  usage.n_from = 1;
  usage.n_to = 2;
  CHECK(invoke(usage).code == 1);

  RunConfig bad = config(Subcommand::rate, data + "/invalid.json");
  bad.n = 2;
  const Outcome o = invoke(bad);
  CHECK(o.code == 2);
  CHECK(o.err.find("invalid spectrum") != std::string::npos);

  RunConfig missing = config(Subcommand::rate, data + "/does-not-exist.json");
  missing.n = 2;
  CHECK(invoke(missing).code != 0);

  RunConfig huge = config(Subcommand::counts);
  huge.n = 10'000'000;
  CHECK(invoke(huge).code == 3);

  RunConfig infeasible = config(Subcommand::protocol);
  infeasible.n = 2;
  infeasible.shift = 3;
  CHECK(invoke(infeasible).code == 1);

  RunConfig ground = config(Subcommand::approx);
  ground.delta = "2";
  CHECK(invoke(ground).code == 1);
}

TEST_CASE("every subcommand runs and is deterministic") {
  std::vector<RunConfig> cfgs;
  RunConfig c = config(Subcommand::bounds);
  c.n = 8;
  cfgs.push_back(c);
  c = config(Subcommand::counts);
  c.n = 2;
  cfgs.push_back(c);
  c = config(Subcommand::protocol);
  c.n = 2;
  c.emit_mapping = true;
  cfgs.push_back(c);
  c = config(Subcommand::protocol);
  c.lcm = true;
  c.format = Format::kv_text;
  cfgs.push_back(c);
  c = config(Subcommand::approx, data + "/irrational.json");
  c.delta = "0.05";
  c.n = 31;
  c.ground = "split";
  cfgs.push_back(c);
  c = config(Subcommand::figure, "");
  c.figure = FigureKind::r100;
  c.n = 20;
  c.eps2_from = "1.1";
  c.eps2_to = "1.5";
  cfgs.push_back(c);
  c = config(Subcommand::figure);
  c.figure = FigureKind::rates_vs_n;
  c.n_max = 6;
  cfgs.push_back(c);
  c = config(Subcommand::figure);
  c.figure = FigureKind::gaussians;
  c.n = 6;
  cfgs.push_back(c);
  for (const auto& cfg : cfgs) {
    const Outcome a = invoke(cfg);
    const Outcome b = invoke(cfg);
    CHECK(a.code == 0);
    CHECK_FALSE(a.out.empty());
    CHECK(a.out == b.out);
    CHECK(a.out.find('\r') == std::string::npos);
  }
}

TEST_CASE("bounds report carries the worked values") {
  RunConfig c = config(Subcommand::bounds);
  c.n = 8;
  const Outcome o = invoke(c);
  CHECK(o.out.find("lcm_lower=3/2") != std::string::npos);
  CHECK(o.out.find("harmonic_lower=6/5") != std::string::npos);
  CHECK(o.out.find("finite_n_lower=3/2") != std::string::npos);
}

TEST_CASE("protocol file feeds simulate") {
  const fs::path dir = scratch_dir();
  RunConfig p = config(Subcommand::protocol);
  p.n = 2;
  p.emit_mapping = true;
  p.output_path = (dir / "p.json").string();
  REQUIRE(invoke(p).code == 0);

  RunConfig s = config(Subcommand::simulate);
  s.protocol_path = p.output_path;
  s.populations = "0,0.25,0.75";
  const Outcome o = invoke(s);
  CHECK(o.code == 0);
  CHECK(o.out.find("deterministic=true") != std::string::npos);
  CHECK(o.out.find("variance=0") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("failed runs leave no output file") {
  const fs::path dir = scratch_dir();
  RunConfig c = config(Subcommand::counts);
  c.n = 10'000'000;
  c.output_path = (dir / "counts.csv").string();
  CHECK(invoke(c).code == 3);
  CHECK(fs::is_empty(dir));

  RunConfig ok = config(Subcommand::counts);
  ok.n = 2;
  ok.output_path = (dir / "counts.csv").string();
  CHECK(invoke(ok).code == 0);
  std::ifstream in(ok.output_path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,count");
  CHECK(std::distance(fs::directory_iterator(dir), fs::directory_iterator()) == 1);
  fs::remove_all(dir);
}

TEST_CASE("csv and kv helpers") {
  CHECK(to_csv(Table{{"a", "b"}, {{"1", "2"}}}) == "a,b\n1,2\n");
  CHECK(to_kv_text({{"x", "1"}, {"y", "z"}}) == "x=1\ny=z\n");
}
