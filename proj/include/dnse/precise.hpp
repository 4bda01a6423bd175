#pragma once

// Extended-precision polishing of lattice solutions, and the map replay that
// depends on it. The map is hyperbolic away from the peaks: a defect of size
// d at one site grows roughly like d / mu^k over k sites, where mu < 1 is the
// tail decay factor. Reproducing a whole lattice from its first two sites
// therefore needs the solution and the iteration carried at far more digits
// than double offers.

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <vector>

#include "dnse/lattice.hpp"

namespace dnse::precise {

using Real = boost::multiprecision::cpp_bin_float_100;

struct PolishedSolution {
  std::vector<Real> psi;
  Real energy;
  Boundary boundary = Boundary::kPeriodic;
  double residual = 0.0;  // max |r| after polishing
  int iterations = 0;
};

/// Bordered Newton on (psi, E) with sum psi^2 = 1, started from a converged
/// double-precision solution. Needs N >= 3. Throws kNoConvergence if the
/// residual does not fall below `target` within max_iter steps.
PolishedSolution polish(const LatticeState& state, const ModelParams& params,
                        double energy, double target = 1e-80,
                        int max_iter = 40);

/// Decimal digits the replay would need: the orbit's worst-case growth,
/// sum over sites of log10 max(1, |2 - E - 3 c psi^2|), plus a margin.
int replay_digits_needed(const LatticeState& state, const ModelParams& params,
                         double energy);

/// Largest working precision the replay will use.
inline constexpr int kMaxReplayDigits = 1000;

struct MapReplay {
  /// max_i |orbit psi[i] - lattice psi[i]| with the orbit in extended
  /// precision, compared against the double-precision lattice.
  double max_deviation = 0.0;
  /// Distance between the orbit point after N steps and the seed (periodic),
  /// or |psi[N]| (open chains, whose padding is zero).
  double closure_error = 0.0;
  /// Same comparison with a plain double-precision orbit, for reference.
  double double_precision_deviation = 0.0;
  bool double_precision_escaped = false;
  /// Working precision used for the polish and the orbit: 100, 300 or 1000.
  int digits = 0;
};

/// Polishes in the smallest working precision covering
/// replay_digits_needed and iterates the map from the first site. Throws
/// kInvalidArgument when more than kMaxReplayDigits would be needed.
MapReplay replay_lattice_with_map(const LatticeState& state,
                                  const ModelParams& params, double energy);

}  // namespace dnse::precise
