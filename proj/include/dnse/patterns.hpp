#pragma once

// Strong-coupling localization patterns. In the c -> infinity limit a
// normalized stationary state is +-1/sqrt(n) on n sites and zero elsewhere;
// its eigenvalue is E = (2m + 4l - c) / n where m counts spots (maximal runs
// of occupied neighbours) and l counts kinks (sign changes inside a spot).

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dnse/boundary.hpp"
#include "dnse/lattice.hpp"

namespace dnse {

/// One trit per site: +1, 0 or -1. At least one trit is nonzero.
class PatternSpec {
 public:
  /// Throws kEmptyPattern, kAllZero, or kInvalidArgument for trits outside
  /// {-1, 0, 1}.
  PatternSpec(std::vector<int> trits, Boundary boundary);

  std::size_t size() const noexcept { return trits_.size(); }
  Boundary boundary() const noexcept { return boundary_; }
  const std::vector<int>& trits() const noexcept { return trits_; }
  int operator[](std::size_t i) const { return trits_[i]; }

  /// Text form over {+, 0, -}.
  std::string to_string() const;

  friend bool operator==(const PatternSpec&, const PatternSpec&) = default;

 private:
  std::vector<int> trits_;
  Boundary boundary_;
};

struct PatternCounts {
  int n = 0;  // occupied sites
  int m = 0;  // spots
  int l = 0;  // kinks

  friend bool operator==(const PatternCounts&, const PatternCounts&) = default;
};

/// Throws kEmptyPattern, kBadCharacter (position set) or kAllZero.
PatternSpec parse_pattern(std::string_view text, Boundary boundary);

/// Spots and kinks by a single pass over the bonds. A fully occupied periodic
/// ring has no spot boundaries, so m = 0 there, and its wrap bond can hold a
/// kink.
PatternCounts count_pattern(const PatternSpec& spec);

double strong_coupling_energy(const PatternCounts& counts, double c);

/// psi[i] = trit[i] / sqrt(n).
LatticeState build_asymptotic_state(const PatternSpec& spec);

/// Site i is occupied iff |psi[i]| > 0.5 max|psi|; its trit is the sign.
/// Throws kZeroState for the zero state.
PatternSpec quantize(const LatticeState& state);

struct PortraitPoint {
  double x = 0.0;  // psi[i]
  double y = 0.0;  // psi[i+1] - psi[i]

  friend bool operator==(const PortraitPoint&, const PortraitPoint&) = default;
  friend auto operator<=>(const PortraitPoint&, const PortraitPoint&) = default;
};

/// The c -> infinity phase-portrait point set, one point per distinct
/// adjacent trit pair (t[i], t[i+1]), mapped to (t[i], t[i+1] - t[i]) / sqrt(n).
/// Sorted, at most nine points. (0, 0) is present iff two neighbouring sites
/// are empty.
std::vector<PortraitPoint> limit_points(const PatternSpec& spec);

/// Trits drawn i.i.d. uniform over {-1, 0, +1} from std::mt19937_64 seeded
/// with `seed`. Each draw takes one 64-bit output, rejecting values at or
/// above the largest multiple of 3, and maps residue 0/1/2 to -1/0/+1. An
/// all-zero draw is discarded and the next N draws from the same stream are
/// used.
PatternSpec random_pattern(std::size_t n, std::uint64_t seed,
                           Boundary boundary = Boundary::kPeriodic);

/// N sites holding `spots` equally spaced runs of `spot_width` occupied sites.
/// Spot k carries sign signs[k]; consecutive spots start `spacing` sites apart.
PatternSpec spaced_spot_pattern(std::size_t n, std::size_t spacing,
                                std::size_t spot_width,
                                const std::vector<int>& signs,
                                Boundary boundary = Boundary::kPeriodic);

}  // namespace dnse
