#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "detwork/protocol.hpp"
#include "detwork/rational.hpp"
#include "detwork/spectrum.hpp"

namespace detwork {

/// How the ground level is snapped. `pinned` keeps it at 0 with its full
/// degeneracy; `split` treats it like every other level (sublevels at
/// 1..d_0 lattice units).
enum class GroundMode { pinned, split };

/// Rational lattice close to an arbitrary spectrum. Every level i other than
/// a pinned ground is split into degeneracy_i non-degenerate sublevels at
/// floor(e_i / unit) + j + 1, j = 0..d_i-1, the first occupied_i of them
/// populated.
struct ApproxPlan {
  explicit ApproxPlan(Spectrum s) : source(std::move(s)) {}

  Spectrum source;
  Rational delta;
  GroundMode ground = GroundMode::pinned;
  int d_star = 1;                  // largest degeneracy
  LatticeSpectrum snapped;         // unit = delta / d_star
  std::vector<std::size_t> origin; // source level of each lattice level
  Rational e_frak;                 // 0 when the ground is occupied
  double c = 0;
  double A_const = 0;
  double log10_A = 0;
  double n_min = 0;                // A * delta^(1 - d_star * |S|)
  double log10_n_min = 0;
  double target = 0;               // max(c * e_frak - 2 delta, 0), per copy
  Rational band;                   // 4 delta
  bool astronomical = false;       // n_min above 1e15
  std::string warning;
};

/// Throws InvalidArgument unless 0 < delta < smallest gap, and for an
/// unnormalized source.
ApproxPlan snap_to_lattice(const Spectrum& source, const Rational& delta, GroundMode ground = GroundMode::pinned);

/// Adds the guarantee constants. Throws NotApplicable when the ground is
/// occupied, InvalidArgument for c outside [0, 1).
ApproxPlan plan_bounded_fluctuation(const Spectrum& source, const Rational& delta, double c,
                                    GroundMode ground = GroundMode::pinned);

struct BandReport {
  bool pass = false;
  Rational w_prime;  // per-copy work on the snapped lattice
  Rational delta;
  Rational min_work, max_work, mean_work, spread;  // per copy on the source spectrum
  Rational max_level_deviation;                    // largest |snapped - source| level energy
  std::vector<std::string> offending;              // transitions outside w_prime +- 2 delta
  std::string structural_error;
};

/// Recomputes every transition's per-copy work on `source` (lattice levels
/// grouped onto the highest source level not above them) and checks
/// |w - w_prime| <= 2 delta. Structural defects are reported, not thrown.
BandReport verify_band(const ProtocolTable& pt, const Spectrum& source, const Rational& w_prime,
                       const Rational& delta);

struct BoundedFluctuationResult {
  ProtocolTable table;
  bool positive_shift = false;  // false: identity protocol, nothing extracted at this n
  BandReport band;
};

BoundedFluctuationResult bounded_fluctuation_protocol(const ApproxPlan& plan, int n, bool emit_explicit = false);

}  // namespace detwork
