#include "detwork/io.hpp"

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "detwork/errors.hpp"

namespace detwork {

using json = nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::string& path, std::string_view content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp-" + std::to_string(static_cast<long>(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidArgument("cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      out.close();
      std::error_code ec;
      fs::remove(tmp, ec);
      throw InvalidArgument("write to '" + tmp.string() + "' failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw InvalidArgument("cannot move output into '" + path + "'");
  }
}

std::string spectrum_to_json(const Spectrum& s) {
  json doc;
  if (!s.label().empty()) doc["label"] = s.label();
  doc["levels"] = json::array();
  for (const auto& l : s.levels())
    doc["levels"].push_back({{"energy", to_string(l.energy)}, {"degeneracy", l.degeneracy}, {"occupied", l.occupied}});
  return doc.dump(2) + "\n";
}

namespace {

json string_json(const BasisString& s) {
  json a = json::array();
  for (const auto& b : s) a.push_back({b.level, b.sublevel});
  return a;
}

}  // namespace

std::string protocol_to_json(const ProtocolTable& pt) {
  json doc;
  doc["n"] = pt.n;
  doc["shift"] = pt.shift;
  doc["unit"] = to_string(pt.lattice.unit);
  doc["lattice"] = {{"m", pt.lattice.m}, {"degeneracy", pt.lattice.degeneracy}, {"occupied", pt.lattice.occupied}};
  doc["shell_plan"] = json::array();
  for (const auto& st : pt.shell_plan)
    doc["shell_plan"].push_back({{"t_in", st.t_in}, {"count", to_string(st.count)}, {"t_out", st.t_out}});
  if (!pt.block_plan.empty()) {
    doc["block_plan"] = json::array();
    for (const auto& b : pt.block_plan)
      doc["block_plan"].push_back({{"from", b.from}, {"to", b.to}, {"count", to_string(b.count)}});
  }
  if (pt.explicit_map) {
    doc["explicit_map"] = json::array();
    for (const auto& [in, out] : *pt.explicit_map)
      doc["explicit_map"].push_back(json::array({string_json(in), string_json(out)}));
  }
  return doc.dump(1) + "\n";
}

ProtocolTable protocol_from_json(std::string_view text) {
  try {
    const json doc = json::parse(text);
    ProtocolTable pt;
    pt.n = doc.at("n").get<int>();
    pt.shift = doc.at("shift").get<std::int64_t>();
    pt.lattice.unit = parse_rational(doc.at("unit").get<std::string>());
    const auto& lat = doc.at("lattice");
    pt.lattice.m = lat.at("m").get<std::vector<std::int64_t>>();
    pt.lattice.degeneracy = lat.at("degeneracy").get<std::vector<int>>();
    pt.lattice.occupied = lat.at("occupied").get<std::vector<int>>();
    validate_lattice(pt.lattice);
    for (const auto& st : doc.at("shell_plan"))
      pt.shell_plan.push_back({st.at("t_in").get<std::int64_t>(), BigInt(st.at("count").get<std::string>(), 10),
                               st.at("t_out").get<std::int64_t>()});
    if (auto it = doc.find("block_plan"); it != doc.end())
      for (const auto& b : *it)
        pt.block_plan.push_back({b.at("from").get<Composition>(), b.at("to").get<Composition>(),
                                 BigInt(b.at("count").get<std::string>(), 10)});
    if (auto it = doc.find("explicit_map"); it != doc.end()) {
      ExplicitMap map;
      auto parse_string = [](const json& a) {
        BasisString s;
        for (const auto& p : a) s.push_back({p.at(0).get<int>(), p.at(1).get<int>()});
        return s;
      };
      for (const auto& pair : *it) map.emplace_back(parse_string(pair.at(0)), parse_string(pair.at(1)));
      pt.explicit_map = std::move(map);
    }
    return pt;
  } catch (const json::exception& e) {
    throw ProtocolViolation(std::string("malformed protocol file: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ProtocolViolation(std::string("malformed count in protocol file: ") + e.what());
  } catch (const InvalidSpectrum& e) {
    throw ProtocolViolation(std::string("malformed lattice in protocol file: ") + e.what());
  }
}

namespace {

std::string csv_field(const std::string& f) {
  if (f.find_first_of(",\"\n") == std::string::npos) return f;
  std::string out = "\"";
  for (char c : f) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string to_csv(const Table& t) {
  std::string out;
  auto row = [&](const std::vector<std::string>& r) {
    for (std::size_t k = 0; k < r.size(); ++k) out += (k ? "," : "") + csv_field(r[k]);
    out += "\n";
  };
  row(t.header);
  for (const auto& r : t.rows) row(r);
  return out;
}

std::string to_kv_text(const KeyValues& kv) {
  std::string out;
  for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
  return out;
}

}  // namespace detwork
