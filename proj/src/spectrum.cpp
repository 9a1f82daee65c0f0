#include "detwork/spectrum.hpp"

#include <json.hpp>

#include "detwork/errors.hpp"

namespace detwork {

namespace {

using json = nlohmann::json;

// DOM builder that stores floating-point literals as their source text,
// so "0.1" stays exactly 1/10.
class ExactNumberSax : public nlohmann::detail::json_sax_dom_parser<json> {
 public:
  using nlohmann::detail::json_sax_dom_parser<json>::json_sax_dom_parser;
  bool number_float(json::number_float_t, const json::string_t& lexeme) {
    json::string_t copy = lexeme;
    return string(copy);
  }
};

Rational energy_from_json(const json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(BigInt(v.dump(), 10));
  throw InvalidSpectrum("energy must be a number or a string");
}

int int_field(const json& obj, const char* key, int fallback, bool required) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    if (required) throw InvalidSpectrum(std::string("level is missing '") + key + "'");
    return fallback;
  }
  if (!it->is_number_integer()) throw InvalidSpectrum(std::string("'") + key + "' must be an integer");
  auto v = it->get<long long>();
  if (v < -1'000'000'000LL || v > 1'000'000'000LL) throw InvalidSpectrum(std::string("'") + key + "' out of range");
  return static_cast<int>(v);
}

}  // namespace

Spectrum::Spectrum(std::vector<LevelSpec> levels, std::string label, Rational ground_shift)
    : levels_(std::move(levels)), label_(std::move(label)), ground_shift_(std::move(ground_shift)) {
  if (levels_.empty()) throw InvalidSpectrum("spectrum has no levels");
  bool any_occupied = false;
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    auto& l = levels_[i];
    l.energy.canonicalize();
    if (i > 0 && !(levels_[i - 1].energy < l.energy))
      throw InvalidSpectrum("energies must be strictly increasing (level " + std::to_string(i) + ")");
    if (l.degeneracy < 1) throw InvalidSpectrum("degeneracy must be positive (level " + std::to_string(i) + ")");
    if (l.occupied < 0 || l.occupied > l.degeneracy)
      throw InvalidSpectrum("occupied must lie in [0, degeneracy] (level " + std::to_string(i) + ")");
    any_occupied = any_occupied || l.occupied > 0;
  }
  if (!any_occupied) throw InvalidSpectrum("no occupied level");
}

std::vector<Rational> Spectrum::energies() const {
  std::vector<Rational> out;
  for (const auto& l : levels_) out.push_back(l.energy);
  return out;
}

std::vector<int> Spectrum::occupied_dims() const {
  std::vector<int> out;
  for (const auto& l : levels_) out.push_back(l.occupied);
  return out;
}

std::vector<std::size_t> Spectrum::occupied_levels() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < levels_.size(); ++i)
    if (levels_[i].occupied > 0) out.push_back(i);
  return out;
}

long Spectrum::total_dimension() const {
  long d = 0;
  for (const auto& l : levels_) d += l.degeneracy;
  return d;
}

long Spectrum::occupied_dimension() const {
  long d = 0;
  for (const auto& l : levels_) d += l.occupied;
  return d;
}

bool Spectrum::full_support() const { return occupied_dimension() == total_dimension(); }

Spectrum make_spectrum(const std::vector<std::string>& energies, const std::vector<int>& degeneracy,
                       const std::vector<int>& occupied, std::string label) {
  if (degeneracy.size() != energies.size() || occupied.size() != energies.size())
    throw InvalidSpectrum("energies, degeneracies and occupied dims differ in length");
  std::vector<LevelSpec> levels;
  for (std::size_t i = 0; i < energies.size(); ++i)
    levels.push_back({parse_rational(energies[i]), degeneracy[i], occupied[i]});
  return Spectrum(std::move(levels), std::move(label));
}

Spectrum parse_spectrum(std::string_view text) {
  json doc;
  try {
    ExactNumberSax sax(doc);
    json::sax_parse(text.begin(), text.end(), &sax);
  } catch (const json::exception& e) {
    throw InvalidSpectrum(std::string("malformed spectrum file: ") + e.what());
  }
  if (!doc.is_object()) throw InvalidSpectrum("spectrum file must hold a JSON object");
  auto lv = doc.find("levels");
  if (lv == doc.end() || !lv->is_array()) throw InvalidSpectrum("spectrum file needs a 'levels' array");

  std::vector<LevelSpec> levels;
  try {
    for (const auto& item : *lv) {
      if (!item.is_object()) throw InvalidSpectrum("each level must be an object");
      auto e = item.find("energy");
      if (e == item.end()) throw InvalidSpectrum("level is missing 'energy'");
      levels.push_back({energy_from_json(*e), int_field(item, "degeneracy", 1, false),
                        int_field(item, "occupied", 0, true)});
    }
  } catch (const InvalidArgument& e) {
    throw InvalidSpectrum(e.what());
  }
  std::string label;
  if (auto it = doc.find("label"); it != doc.end()) {
    if (!it->is_string()) throw InvalidSpectrum("'label' must be a string");
    label = it->get<std::string>();
  }
  return normalize_ground(Spectrum(std::move(levels), std::move(label)));
}

Spectrum normalize_ground(const Spectrum& s) {
  const Rational shift = s.levels().front().energy;
  if (shift == 0) return s;
  std::vector<LevelSpec> levels = s.levels();
  for (auto& l : levels) l.energy -= shift;
  return Spectrum(std::move(levels), s.label(), s.ground_shift() + shift);
}

std::vector<std::size_t> LatticeSpectrum::occupied_levels() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < occupied.size(); ++i)
    if (occupied[i] > 0) out.push_back(i);
  return out;
}

long LatticeSpectrum::total_dimension() const {
  long d = 0;
  for (int x : degeneracy) d += x;
  return d;
}

long LatticeSpectrum::occupied_dimension() const {
  long d = 0;
  for (int x : occupied) d += x;
  return d;
}

void validate_lattice(const LatticeSpectrum& ls) {
  if (ls.m.empty()) throw InvalidSpectrum("lattice has no levels");
  if (ls.degeneracy.size() != ls.m.size() || ls.occupied.size() != ls.m.size())
    throw InvalidSpectrum("lattice arrays differ in length");
  if (ls.unit <= 0) throw InvalidSpectrum("lattice unit must be positive");
  if (ls.m.front() < 0) throw InvalidSpectrum("lattice indices must be non-negative");
  bool any = false;
  for (std::size_t i = 0; i < ls.m.size(); ++i) {
    if (i > 0 && ls.m[i] <= ls.m[i - 1]) throw InvalidSpectrum("lattice indices must be strictly increasing");
    if (ls.degeneracy[i] < 1 || ls.occupied[i] < 0 || ls.occupied[i] > ls.degeneracy[i])
      throw InvalidSpectrum("bad degeneracy or occupied dimension on the lattice");
    any = any || ls.occupied[i] > 0;
  }
  if (!any) throw InvalidSpectrum("no occupied level");
}

LatticeSpectrum to_lattice(const Spectrum& s) {
  if (!s.normalized()) throw InvalidArgument("to_lattice needs a spectrum with ground energy 0");
  Rational unit = 0;
  for (const auto& l : s.levels()) unit = rational_gcd(unit, l.energy);
  if (unit == 0) unit = 1;
  LatticeSpectrum ls;
  ls.unit = unit;
  for (const auto& l : s.levels()) {
    Rational q = l.energy / unit;
    q.canonicalize();
    if (q.get_den() != 1) throw InvariantViolation("lattice unit does not divide an energy");
    ls.m.push_back(to_int64(q.get_num(), "lattice index"));
    ls.degeneracy.push_back(l.degeneracy);
    ls.occupied.push_back(l.occupied);
  }
  return ls;
}

Rational eps_min(const Spectrum& s) {
  for (const auto& l : s.levels())
    if (l.occupied > 0) return l.energy;
  throw InvariantViolation("spectrum without occupied level");
}

bool dominates(const Spectrum& a, const Spectrum& b) {
  if (a.size() != b.size()) throw InvalidArgument("dominates: level counts differ");
  bool result = true;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto &x = a.level(i), &y = b.level(i);
    if (x.energy != y.energy || x.degeneracy != y.degeneracy)
      throw InvalidArgument("dominates: level structure differs at level " + std::to_string(i));
    result = result && x.occupied <= y.occupied;
  }
  return result;
}

}  // namespace detwork
