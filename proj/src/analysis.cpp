#include "dnse/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <unordered_map>

#include "dnse/error.hpp"

namespace dnse {

std::string_view to_string(PortraitLabel label) {
  switch (label) {
    case PortraitLabel::kRegularPeriodic: return "regular_periodic";
    case PortraitLabel::kIrregularCommensurate: return "irregular_commensurate";
    case PortraitLabel::kIrregularIncommensurate:
      return "irregular_incommensurate";
  }
  return "unknown";
}

PhasePortrait phase_portrait(const LatticeState& state) {
  const std::size_t n = state.size();
  if (n < 2) {
    throw Error(ErrorKind::kInvalidArgument, "phase portrait needs N >= 2");
  }
  PhasePortrait portrait;
  portrait.source = PortraitSource::kLattice;
  portrait.cyclic = state.boundary() == Boundary::kPeriodic;
  const std::size_t count = portrait.cyclic ? n : n - 1;
  portrait.points.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double here = state[i];
    portrait.points.push_back({here, state[(i + 1) % n] - here});
  }
  return portrait;
}

PhasePortrait phase_portrait(const MapOrbit& orbit) {
  PhasePortrait portrait;
  portrait.source = PortraitSource::kOrbit;
  for (std::size_t i = 0; i + 1 < orbit.points.size(); ++i) {
    // Thinned orbits only contribute consecutive pairs.
    if (!orbit.steps.empty() && orbit.steps[i + 1] != orbit.steps[i] + 1) {
      continue;
    }
    portrait.points.push_back(
        {orbit.points[i].psi, orbit.points[i + 1].psi - orbit.points[i].psi});
  }
  return portrait;
}

namespace {

double max_norm(const PortraitPoint& a, const PortraitPoint& b) {
  return std::max(std::abs(a.x - b.x), std::abs(a.y - b.y));
}

struct CellKey {
  std::int64_t ix;
  std::int64_t iy;
  bool operator==(const CellKey&) const = default;
};

struct CellHash {
  std::size_t operator()(const CellKey& k) const noexcept {
    return std::hash<std::int64_t>()(k.ix) * 1000003u ^
           std::hash<std::int64_t>()(k.iy);
  }
};

}  // namespace

std::vector<PortraitPoint> cluster_points(std::span<const PortraitPoint> points,
                                          double tol) {
  if (!(tol > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "clustering tolerance must be > 0");
  }
  std::vector<PortraitPoint> reps;
  if (points.empty()) return reps;

  double extent = 0.0;
  for (const auto& p : points) {
    extent = std::max({extent, std::abs(p.x), std::abs(p.y)});
  }
  // Hash grid with cell size tol: a representative within tol lies in the
  // 3x3 block around the point's cell. Falls back to a linear scan when the
  // cell indices would not fit.
  const bool use_grid = extent / tol < 1e15;
  if (!use_grid) {
    for (const auto& p : points) {
      const bool found = std::any_of(reps.begin(), reps.end(), [&](const auto& r) {
        return max_norm(p, r) <= tol;
      });
      if (!found) reps.push_back(p);
    }
    return reps;
  }

  std::unordered_map<CellKey, std::vector<std::size_t>, CellHash> grid;
  auto cell_of = [tol](const PortraitPoint& p) {
    return CellKey{static_cast<std::int64_t>(std::floor(p.x / tol)),
                   static_cast<std::int64_t>(std::floor(p.y / tol))};
  };
  for (const auto& p : points) {
    const CellKey key = cell_of(p);
    std::size_t best = std::numeric_limits<std::size_t>::max();
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        auto it = grid.find({key.ix + dx, key.iy + dy});
        if (it == grid.end()) continue;
        for (std::size_t idx : it->second) {
          if (idx < best && max_norm(p, reps[idx]) <= tol) best = idx;
        }
      }
    }
    if (best == std::numeric_limits<std::size_t>::max()) {
      grid[key].push_back(reps.size());
      reps.push_back(p);
    }
  }
  return reps;
}

std::size_t distinct_points(const PhasePortrait& portrait, double tol) {
  return cluster_points(portrait.points, tol).size();
}

namespace {

std::optional<std::size_t> cyclic_period(std::span<const PortraitPoint> pts,
                                         double tol) {
  const std::size_t n = pts.size();
  for (std::size_t p = 1; p < n; ++p) {
    if (n % p != 0) continue;
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      ok = std::abs(pts[(i + p) % n].x - pts[i].x) <= tol;
    }
    if (ok) return p;
  }
  return std::nullopt;
}

std::optional<std::size_t> sequence_period(std::span<const PortraitPoint> pts,
                                           double tol) {
  const std::size_t n = pts.size();
  for (std::size_t p = 1; 2 * p <= n; ++p) {
    bool ok = true;
    for (std::size_t i = 0; i + p < n && ok; ++i) {
      ok = max_norm(pts[i + p], pts[i]) <= tol;
    }
    if (ok) return p;
  }
  return std::nullopt;
}

// sqrt(lambda_min / lambda_max) of the 2x2 covariance of a point cloud.
double anisotropy(std::span<const PortraitPoint> cloud) {
  double mx = 0.0;
  double my = 0.0;
  for (const auto& p : cloud) {
    mx += p.x;
    my += p.y;
  }
  mx /= static_cast<double>(cloud.size());
  my /= static_cast<double>(cloud.size());
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (const auto& p : cloud) {
    sxx += (p.x - mx) * (p.x - mx);
    syy += (p.y - my) * (p.y - my);
    sxy += (p.x - mx) * (p.y - my);
  }
  const double half_trace = 0.5 * (sxx + syy);
  const double disc =
      std::sqrt(0.25 * (sxx - syy) * (sxx - syy) + sxy * sxy);
  const double lmax = half_trace + disc;
  const double lmin = std::max(0.0, half_trace - disc);
  return lmax > 0.0 ? std::sqrt(lmin / lmax) : 0.0;
}

}  // namespace

Rect bounding_box(const PhasePortrait& portrait) {
  if (portrait.points.empty()) return {};
  Rect box{std::numeric_limits<double>::infinity(),
           -std::numeric_limits<double>::infinity(),
           std::numeric_limits<double>::infinity(),
           -std::numeric_limits<double>::infinity()};
  for (const auto& p : portrait.points) {
    box.x_min = std::min(box.x_min, p.x);
    box.x_max = std::max(box.x_max, p.x);
    box.y_min = std::min(box.y_min, p.y);
    box.y_max = std::max(box.y_max, p.y);
  }
  return box;
}

PortraitClass classify_portrait(const PhasePortrait& portrait,
                                const ClassifyConfig& config) {
  PortraitClass out;
  out.tol = config.distinct_tol;
  if (portrait.points.empty()) {
    out.label = PortraitLabel::kIrregularCommensurate;
    out.note = "empty portrait";
    return out;
  }
  out.distinct_points = distinct_points(portrait, config.distinct_tol);

  out.period = portrait.cyclic
                   ? cyclic_period(portrait.points, config.shift_tol)
                   : sequence_period(portrait.points, config.shift_tol);
  if (out.period) {
    out.label = PortraitLabel::kRegularPeriodic;
    return out;
  }

  const Rect box = bounding_box(portrait);
  out.diameter = std::max(box.x_max - box.x_min, box.y_max - box.y_min);
  if (out.diameter == 0.0) {
    out.label = PortraitLabel::kIrregularCommensurate;
    out.note = "all points coincide";
    return out;
  }
  const std::vector<PortraitPoint> skeleton =
      cluster_points(portrait.points, config.band_tol * out.diameter / 5.0);
  out.skeleton_points = skeleton.size();
  const std::size_t k = config.neighbours;
  if (skeleton.size() < k + 1) {
    out.label = PortraitLabel::kIrregularCommensurate;
    out.note = "sparse skeleton: a finite closed cycle of point groups";
    return out;
  }

  std::vector<double> shape;
  shape.reserve(skeleton.size());
  std::vector<std::pair<double, std::size_t>> dist(skeleton.size());
  std::vector<PortraitPoint> cloud;
  for (std::size_t i = 0; i < skeleton.size(); ++i) {
    for (std::size_t j = 0; j < skeleton.size(); ++j) {
      const double dx = skeleton[j].x - skeleton[i].x;
      const double dy = skeleton[j].y - skeleton[i].y;
      dist[j] = {dx * dx + dy * dy, j};
    }
    std::partial_sort(dist.begin(), dist.begin() + static_cast<long>(k + 1),
                      dist.end());
    cloud.clear();
    for (std::size_t j = 0; j <= k; ++j) cloud.push_back(skeleton[dist[j].second]);
    shape.push_back(anisotropy(cloud));
  }
  const auto curve_like = std::count_if(shape.begin(), shape.end(), [&](double a) {
    return a <= config.anisotropy_tol;
  });
  out.curve_fraction =
      static_cast<double>(curve_like) / static_cast<double>(shape.size());
  std::nth_element(shape.begin(), shape.begin() + static_cast<long>(shape.size() / 2),
                   shape.end());
  out.median_anisotropy = shape[shape.size() / 2];
  if (out.median_anisotropy <= config.anisotropy_tol) {
    out.label = PortraitLabel::kIrregularCommensurate;
    out.note = "points follow closed curves";
  } else {
    out.label = PortraitLabel::kIrregularIncommensurate;
    out.note = "points are dispersed in two dimensions";
  }
  return out;
}

TailPrediction tail_decay_predicted(double energy) {
  if (!(energy < 0.0)) {
    throw Error(ErrorKind::kNotLocalized,
                "tails decay only below the band edge (E < 0)");
  }
  const double b = 2.0 - energy;
  // Smaller root of mu^2 - b mu + 1, written without cancellation.
  return {2.0 / (b + std::sqrt(b * b - 4.0)), std::exp(-std::sqrt(-energy))};
}

TailFit fit_tail(const LatticeState& state, double energy,
                 std::size_t peak_index, const TailWindow& window) {
  const std::size_t n = state.size();
  if (peak_index >= n || window.last_offset < window.first_offset ||
      (window.direction != 1 && window.direction != -1)) {
    throw Error(ErrorKind::kInvalidArgument, "bad tail window");
  }
  if (window.first_offset == 0) {
    throw Error(ErrorKind::kWindowTouchesPeak, "window includes the peak",
                peak_index);
  }
  if (window.last_offset == window.first_offset) {
    throw Error(ErrorKind::kInvalidArgument, "tail window needs two sites");
  }
  const TailPrediction predicted = tail_decay_predicted(energy);
  const double peak = state.max_abs();
  const bool periodic = state.boundary() == Boundary::kPeriodic;

  TailFit fit;
  fit.decay_factor_predicted = predicted.discrete;
  fit.continuum_predicted = predicted.continuum;
  double sx = 0.0;
  double sy = 0.0;
  double sxx = 0.0;
  double sxy = 0.0;
  std::vector<std::pair<double, double>> samples;
  for (std::size_t d = window.first_offset; d <= window.last_offset; ++d) {
    const auto pos = static_cast<std::ptrdiff_t>(peak_index) +
                     window.direction * static_cast<std::ptrdiff_t>(d);
    std::ptrdiff_t site = pos;
    if (periodic) {
      const auto sn = static_cast<std::ptrdiff_t>(n);
      site = ((pos % sn) + sn) % sn;
    } else if (pos < 0 || pos >= static_cast<std::ptrdiff_t>(n)) {
      throw Error(ErrorKind::kInvalidArgument, "tail window leaves the chain");
    }
    const auto s = static_cast<std::size_t>(site);
    if (s == peak_index || std::abs(state[s]) > 0.5 * peak) {
      throw Error(ErrorKind::kWindowTouchesPeak,
                  "site " + std::to_string(s) + " is occupied", s);
    }
    if (state[s] == 0.0) {
      throw Error(ErrorKind::kZeroAmplitudeInWindow,
                  "site " + std::to_string(s) + " has zero amplitude", s);
    }
    if (std::abs(state[s]) > 0.1 * peak) fit.nonlinear_window = true;
    if (d == window.first_offset) fit.first_site = s;
    fit.last_site = s;
    const double x = static_cast<double>(d);
    const double y = std::log(std::abs(state[s]));
    samples.emplace_back(x, y);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const auto m = static_cast<double>(samples.size());
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / m;
  double sq = 0.0;
  for (const auto& [x, y] : samples) {
    const double e = y - (intercept + slope * x);
    sq += e * e;
  }
  fit.rms_log_error = std::sqrt(sq / m);
  fit.decay_factor_measured = std::exp(slope);
  return fit;
}

BoxCountResult box_count(const PhasePortrait& portrait,
                         std::span<const double> sizes) {
  if (portrait.points.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "box counting needs points");
  }
  if (sizes.size() < 2) {
    throw Error(ErrorKind::kInvalidArgument, "box counting needs >= 2 sizes");
  }
  const Rect box = bounding_box(portrait);
  BoxCountResult result;
  double sx = 0.0;
  double sy = 0.0;
  double sxx = 0.0;
  double sxy = 0.0;
  for (double size : sizes) {
    if (!(size > 0.0)) {
      throw Error(ErrorKind::kInvalidArgument, "box sizes must be > 0");
    }
    std::unordered_map<CellKey, char, CellHash> occupied;
    for (const auto& p : portrait.points) {
      occupied.emplace(
          CellKey{static_cast<std::int64_t>(std::floor((p.x - box.x_min) / size)),
                  static_cast<std::int64_t>(std::floor((p.y - box.y_min) / size))},
          1);
    }
    result.rows.emplace_back(size, occupied.size());
    const double x = std::log(size);
    const double y = std::log(static_cast<double>(occupied.size()));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const auto m = static_cast<double>(sizes.size());
  const double denom = m * sxx - sx * sx;
  result.slope = denom != 0.0 ? -(m * sxy - sx * sy) / denom : 0.0;
  return result;
}

ZoomReport zoom_report(const PhasePortrait& portrait, const Rect& region,
                       std::size_t levels, double shrink) {
  if (!(shrink > 0.0 && shrink < 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "zoom shrink must be in (0, 1)");
  }
  ZoomReport report;
  const double cx = 0.5 * (region.x_min + region.x_max);
  const double cy = 0.5 * (region.y_min + region.y_max);
  double hx = 0.5 * (region.x_max - region.x_min);
  double hy = 0.5 * (region.y_max - region.y_min);
  std::vector<PortraitPoint> current = portrait.points;
  for (std::size_t level = 0; level < levels; ++level) {
    ZoomLevel z;
    z.region = level == 0 ? region : Rect{cx - hx, cx + hx, cy - hy, cy + hy};
    for (const auto& p : current) {
      if (z.region.contains(p)) z.points.push_back(p);
    }
    if (z.points.empty() && !report.empty_level) report.empty_level = level;
    current = z.points;
    report.levels.push_back(std::move(z));
    hx *= shrink;
    hy *= shrink;
  }
  return report;
}

}  // namespace dnse
