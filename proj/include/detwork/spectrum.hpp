#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "detwork/rational.hpp"

namespace detwork {

struct LevelSpec {
  Rational energy;
  int degeneracy = 1;
  int occupied = 0;  // dimension of the populated block inside this level
};

/// Energy levels with degeneracies and the dimensions of the populated
/// blocks. Immutable; the constructor validates.
class Spectrum {
 public:
  /// Throws InvalidSpectrum on empty input, non-increasing energies,
  /// degeneracy < 1, occupied outside [0, degeneracy] or no occupied level.
  explicit Spectrum(std::vector<LevelSpec> levels, std::string label = {}, Rational ground_shift = 0);

  const std::vector<LevelSpec>& levels() const { return levels_; }
  const LevelSpec& level(std::size_t i) const { return levels_.at(i); }
  std::size_t size() const { return levels_.size(); }
  const std::string& label() const { return label_; }

  /// Amount subtracted from the original energies by normalize_ground.
  const Rational& ground_shift() const { return ground_shift_; }

  std::vector<Rational> energies() const;
  std::vector<int> occupied_dims() const;
  std::vector<std::size_t> occupied_levels() const;
  long total_dimension() const;
  long occupied_dimension() const;
  bool full_support() const;
  bool ground_occupied() const { return levels_.front().occupied > 0; }
  bool normalized() const { return levels_.front().energy == 0; }

 private:
  std::vector<LevelSpec> levels_;
  std::string label_;
  Rational ground_shift_;
};

/// Convenience constructor for code and tests. Energies are parsed exactly.
Spectrum make_spectrum(const std::vector<std::string>& energies, const std::vector<int>& degeneracy,
                       const std::vector<int>& occupied, std::string label = {});

/// Parses the JSON spectrum format and normalizes the ground to zero.
/// Numeric energy literals keep their exact decimal value.
Spectrum parse_spectrum(std::string_view text);

Spectrum normalize_ground(const Spectrum& s);

/// Energies written as integer multiples of a common unit.
struct LatticeSpectrum {
  Rational unit;
  std::vector<std::int64_t> m;
  std::vector<int> degeneracy;
  std::vector<int> occupied;

  std::size_t size() const { return m.size(); }
  std::vector<std::size_t> occupied_levels() const;
  std::int64_t m_max() const { return m.back(); }
  long total_dimension() const;
  long occupied_dimension() const;
  Rational energy(std::size_t i) const { return unit * Rational(m[i]); }
};

/// Throws InvalidSpectrum when the lattice is not strictly increasing,
/// non-negative, or has inconsistent sizes.
void validate_lattice(const LatticeSpectrum& ls);

/// Largest unit such that every energy is a non-negative integer multiple.
/// Requires a normalized spectrum. Throws ResourceLimitExceeded when a
/// multiple does not fit in 64 bits.
LatticeSpectrum to_lattice(const Spectrum& s);

/// Lowest occupied energy.
Rational eps_min(const Spectrum& s);

/// True when every occupied dimension of a is at most that of b.
/// Throws InvalidArgument when energies or degeneracies differ.
bool dominates(const Spectrum& a, const Spectrum& b);

}  // namespace detwork
