#pragma once

// Phase-portrait analysis of lattice profiles and map orbits: the planar
// point set {(psi[i], psi[i+1] - psi[i])}, its distinct-point statistics,
// a three-way structural classification, exponential tail fits, and two
// exploratory self-similarity tools (box counting and nested zooms).

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dnse/lattice.hpp"
#include "dnse/map.hpp"
#include "dnse/patterns.hpp"

namespace dnse {

enum class PortraitSource { kLattice, kOrbit };

struct PhasePortrait {
  std::vector<PortraitPoint> points;
  PortraitSource source = PortraitSource::kLattice;
  /// For lattice sources: whether the last point wraps to site 0.
  bool cyclic = false;
};

/// All (psi[i], psi[i+1] - psi[i]) in lattice order: N points on a periodic
/// ring, N-1 on an open chain. Throws kInvalidArgument for N < 2.
PhasePortrait phase_portrait(const LatticeState& state);

/// (psi[i], Z[i+1]) for consecutive orbit points.
PhasePortrait phase_portrait(const MapOrbit& orbit);

/// Greedy first-fit clustering in the max-norm: each point joins the earliest
/// cluster whose representative lies within tol, else founds a new one.
/// Returns the representatives in creation order.
std::vector<PortraitPoint> cluster_points(std::span<const PortraitPoint> points,
                                          double tol);

std::size_t distinct_points(const PhasePortrait& portrait, double tol);

enum class PortraitLabel {
  kRegularPeriodic,
  kIrregularCommensurate,
  kIrregularIncommensurate,
};

std::string_view to_string(PortraitLabel label);

struct ClassifyConfig {
  /// Max-norm tolerance for shift invariance of the profile.
  double shift_tol = 1e-6;
  /// Curve band half-width as a fraction of the portrait diameter. Points are
  /// merged at a fifth of this before the local-shape test.
  double band_tol = 0.05;
  /// A neighbourhood counts as curve-like when sqrt(lambda_min/lambda_max)
  /// of its covariance is at most this.
  double anisotropy_tol = 0.35;
  std::size_t neighbours = 6;
  /// Tolerance used for the reported distinct-point count.
  double distinct_tol = 1e-6;
};

struct PortraitClass {
  PortraitLabel label = PortraitLabel::kIrregularIncommensurate;
  std::size_t distinct_points = 0;
  std::optional<std::size_t> period;
  double tol = 0.0;
  // Diagnostics for the non-periodic branch.
  double diameter = 0.0;
  std::size_t skeleton_points = 0;
  double curve_fraction = 0.0;
  double median_anisotropy = 0.0;
  std::string note;
};

/// regular_periodic when the profile is invariant under a shift p smaller
/// than its length (smallest such p reported); otherwise
/// irregular_commensurate when the merged point set is locally curve-like
/// (a closed loop or a thin band), else irregular_incommensurate.
PortraitClass classify_portrait(const PhasePortrait& portrait,
                                const ClassifyConfig& config = {});

struct TailPrediction {
  /// Root in (0, 1) of mu + 1/mu = 2 - E from the linearized lattice equation.
  double discrete = 0.0;
  /// exp(-sqrt(-E)), the continuum limit.
  double continuum = 0.0;
};

/// Throws kNotLocalized for E >= 0.
TailPrediction tail_decay_predicted(double energy);

struct TailWindow {
  std::size_t first_offset = 1;
  std::size_t last_offset = 4;
  int direction = +1;  // +1 walks to higher site indices, -1 to lower
};

struct TailFit {
  double decay_factor_measured = 0.0;
  double decay_factor_predicted = 0.0;
  double continuum_predicted = 0.0;
  std::size_t first_site = 0;
  std::size_t last_site = 0;
  /// Some window amplitude exceeds 0.1 max|psi|, where the cubic term is not
  /// negligible and the linear tail law is only approximate.
  bool nonlinear_window = false;
  double rms_log_error = 0.0;
};

/// Least-squares fit of log|psi| against distance from the peak.
/// Throws kWindowTouchesPeak when the window includes the peak or an
/// occupied site (|psi| > 0.5 max|psi|), kZeroAmplitudeInWindow, and
/// kNotLocalized for E >= 0.
TailFit fit_tail(const LatticeState& state, double energy,
                 std::size_t peak_index, const TailWindow& window);

struct BoxCountResult {
  std::vector<std::pair<double, std::size_t>> rows;  // (box size, occupied)
  /// -d log(occupied) / d log(size). Exploratory only.
  double slope = 0.0;
};

/// Counts occupied boxes of each size on a grid anchored at the lower-left
/// corner of the portrait's bounding square. Needs >= 2 positive sizes and a
/// non-empty portrait (kInvalidArgument).
BoxCountResult box_count(const PhasePortrait& portrait,
                         std::span<const double> sizes);

struct Rect {
  double x_min = 0.0;
  double x_max = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;

  bool contains(const PortraitPoint& p) const noexcept {
    return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
  }
};

Rect bounding_box(const PhasePortrait& portrait);

struct ZoomLevel {
  Rect region;
  std::vector<PortraitPoint> points;
};

struct ZoomReport {
  std::vector<ZoomLevel> levels;
  /// First level with no points (reported, not thrown).
  std::optional<std::size_t> empty_level;
};

/// Level k keeps the points inside `region` shrunk by shrink^k about its
/// centre, so every level is a subset of the previous one.
ZoomReport zoom_report(const PhasePortrait& portrait, const Rect& region,
                       std::size_t levels, double shrink = 0.5);

}  // namespace dnse
