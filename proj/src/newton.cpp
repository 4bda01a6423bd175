#include "dnse/newton.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "dnse/error.hpp"
#include "dnse/kernels.hpp"

namespace dnse {

std::string_view to_string(NewtonStatus status) {
  switch (status) {
    case NewtonStatus::kConverged: return "converged";
    case NewtonStatus::kNoConvergence: return "no_convergence";
    case NewtonStatus::kSingularJacobian: return "singular_jacobian";
  }
  return "unknown";
}

double NewtonConfig::sum_threshold_for(std::size_t n) const {
  return sum_threshold.value_or(1e-8 * std::sqrt(static_cast<double>(n)));
}

std::vector<double> JacobianMatrix::multiply(std::span<const double> x) const {
  const std::size_t n = size();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = diag[i] * x[i];
    if (i > 0) acc += kOffDiagonal * x[i - 1];
    if (i + 1 < n) acc += kOffDiagonal * x[i + 1];
    if (has_corners()) {
      if (i == 0) acc += kOffDiagonal * x[n - 1];
      if (i == n - 1) acc += kOffDiagonal * x[0];
    }
    y[i] = acc;
  }
  return y;
}

double energy_estimate(const LatticeState& state, const ModelParams& params,
                       double sum_threshold) {
  if (state.boundary() != Boundary::kPeriodic ||
      params.boundary != Boundary::kPeriodic) {
    throw Error(ErrorKind::kInvalidArgument,
                "the sum-ratio energy estimate holds for periodic rings only");
  }
  double sum = 0.0;
  double cubes = 0.0;
  for (double p : state.values()) {
    sum += p;
    cubes += p * p * p;
  }
  if (!(std::abs(sum) >= sum_threshold)) {
    throw Error(ErrorKind::kSumTooSmall,
                "|sum psi| = " + std::to_string(std::abs(sum)) +
                    " is below the threshold");
  }
  return -params.c * cubes / sum;
}

double energy_estimate(const LatticeState& state, const ModelParams& params) {
  return energy_estimate(state, params,
                         NewtonConfig{}.sum_threshold_for(state.size()));
}

double rayleigh_energy(const LatticeState& state, const ModelParams& params) {
  const double norm2 = state.norm_squared();
  if (norm2 == 0.0) {
    throw Error(ErrorKind::kZeroState, "Rayleigh quotient of the zero state");
  }
  // psi . r(psi, E=0) = psi . (L psi - c psi^3)
  const std::vector<double> r = residual(state, params, 0.0);
  const auto psi = state.values();
  return std::inner_product(psi.begin(), psi.end(), r.begin(), 0.0) / norm2;
}

JacobianMatrix assemble_jacobian(const LatticeState& state,
                                 const ModelParams& params, double energy) {
  if (state.size() < 3) {
    throw Error(ErrorKind::kLatticeTooSmall,
                "tridiagonal Jacobian needs N >= 3, got " +
                    std::to_string(state.size()));
  }
  JacobianMatrix jac;
  jac.boundary = params.boundary;
  jac.diag.resize(state.size());
  for (std::size_t i = 0; i < state.size(); ++i) {
    const double p = state[i];
    jac.diag[i] = 2.0 - energy - 3.0 * params.c * p * p;
  }
  return jac;
}

std::vector<double> solve_linear(const JacobianMatrix& jacobian,
                                 std::span<const double> rhs,
                                 double pivot_tolerance) {
  if (rhs.size() != jacobian.size()) {
    throw Error(ErrorKind::kInvalidArgument, "rhs size does not match J");
  }
  if (jacobian.size() < 3) {
    throw Error(ErrorKind::kLatticeTooSmall, "solve_linear needs N >= 3");
  }
  return kernels::solve_symmetric_cyclic<double>(
      jacobian.diag, JacobianMatrix::kOffDiagonal, jacobian.has_corners(), rhs,
      pivot_tolerance);
}

namespace {

// Direct 1x1 / 2x2 solves for lattices below the tridiagonal regime. On a
// two-site ring both neighbours of a site are the same site, so the coupling
// doubles; on a one-site ring the hopping cancels against the 2 on the
// diagonal.
std::vector<double> solve_small(std::span<const double> psi, Boundary bc,
                                double c, double energy,
                                std::span<const double> rhs,
                                double pivot_tolerance) {
  const bool periodic = bc == Boundary::kPeriodic;
  auto diag = [&](std::size_t i) {
    return 2.0 - energy - 3.0 * c * psi[i] * psi[i];
  };
  if (psi.size() == 1) {
    const double a = periodic ? diag(0) - 2.0 : diag(0);
    if (std::abs(a) <= pivot_tolerance * (std::abs(a) + 2.0)) {
      throw Error(ErrorKind::kSingularJacobian, "1x1 Jacobian vanishes", 0);
    }
    return {rhs[0] / a};
  }
  const double off = periodic ? -2.0 : -1.0;
  const double d0 = diag(0);
  const double d1 = diag(1);
  const double det = d0 * d1 - off * off;
  const double scale = std::max({std::abs(d0), std::abs(d1), std::abs(off)});
  if (std::abs(det) <= pivot_tolerance * scale * scale) {
    throw Error(ErrorKind::kSingularJacobian, "2x2 Jacobian is singular", 0);
  }
  return {(d1 * rhs[0] - off * rhs[1]) / det,
          (d0 * rhs[1] - off * rhs[0]) / det};
}

std::vector<double> jacobian_solve(const LatticeState& state,
                                   const ModelParams& params, double energy,
                                   std::span<const double> rhs,
                                   double pivot_tolerance) {
  if (state.size() < 3) {
    return solve_small(state.values(), state.boundary(), params.c, energy, rhs,
                       pivot_tolerance);
  }
  return solve_linear(assemble_jacobian(state, params, energy), rhs,
                      pivot_tolerance);
}

// Rounding error of the sum ratio: each sum carries about eps times its sum of
// magnitudes, amplified by the cancellation in the sum itself.
double sum_ratio_rounding(const LatticeState& state, double energy) {
  double s1 = 0.0, a1 = 0.0, s3 = 0.0, a3 = 0.0;
  for (double v : state.values()) {
    s1 += v;
    a1 += std::abs(v);
    s3 += v * v * v;
    a3 += std::abs(v * v * v);
  }
  if (s1 == 0.0 || s3 == 0.0) return std::numeric_limits<double>::infinity();
  return std::numeric_limits<double>::epsilon() * std::abs(energy) *
         (a1 / std::abs(s1) + a3 / std::abs(s3));
}

// The sum ratio is used only where its rounding cannot hold the residual above
// `budget`; otherwise, as for |sum psi| < sum_threshold, Rayleigh takes over.
// Both agree at a solution, so the fixed point does not depend on the choice.
double estimate_energy(const LatticeState& state, const ModelParams& params,
                       EnergyEstimator estimator, double sum_threshold,
                       double budget) {
  if (estimator == EnergyEstimator::kSumRatio &&
      params.boundary == Boundary::kPeriodic &&
      std::abs(state.sum()) >= sum_threshold) {
    const double e = energy_estimate(state, params, sum_threshold);
    if (sum_ratio_rounding(state, e) * state.max_abs() <= budget) return e;
  }
  return rayleigh_energy(state, params);
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(),
                     [](double x) { return std::isfinite(x); });
}

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

// Largest sum of term magnitudes in any residual component. Rounding alone
// leaves a residual of a few ulps of this.
double residual_scale(const LatticeState& psi, const ModelParams& params,
                      double energy) {
  const std::size_t n = psi.size();
  const bool periodic = params.boundary == Boundary::kPeriodic;
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double left = i > 0 ? psi[i - 1] : (periodic ? psi[n - 1] : 0.0);
    const double right = i + 1 < n ? psi[i + 1] : (periodic ? psi[0] : 0.0);
    const double p = std::abs(psi[i]);
    scale = std::max(scale, std::abs(left) + 2 * p + std::abs(right) +
                                std::abs(params.c) * p * p * p +
                                std::abs(energy) * p);
  }
  return scale;
}

constexpr double kRoundingUlps = 32.0;

}  // namespace

NewtonResult newton_solve(const LatticeState& initial,
                          const ModelParams& params,
                          const NewtonConfig& config) {
  if (initial.boundary() != params.boundary) {
    throw Error(ErrorKind::kInvalidArgument,
                "initial state and parameters disagree on the boundary");
  }
  const std::size_t n = initial.size();
  const double sum_threshold = config.sum_threshold_for(n);
  const EnergyEstimator estimator = params.boundary == Boundary::kPeriodic
                                        ? config.estimator
                                        : EnergyEstimator::kRayleigh;

  LatticeState psi = normalize(initial);
  NewtonReport report;
  report.initial_counts = count_pattern(quantize(psi));

  const auto budget = [&](double e) {
    return 0.25 * std::max(config.tol_residual,
                           kRoundingUlps * std::numeric_limits<double>::epsilon() *
                               residual_scale(psi, params, e));
  };
  double energy = estimate_energy(psi, params, estimator, sum_threshold,
                                  budget(rayleigh_energy(psi, params)));
  LatticeState best_state = psi;
  double best_energy = energy;
  double best_residual = std::numeric_limits<double>::infinity();

  for (int k = 0;; ++k) {
    if (k > 0 && config.update == EnergyUpdate::kEstimateThenStep) {
      energy = estimate_energy(psi, params, estimator, sum_threshold,
                               budget(energy));
    }
    const std::vector<double> r = residual(psi, params, energy);
    const double rnorm = max_abs(r);
    report.energy_history.push_back(energy);
    report.residual_history.push_back(rnorm);

    if (rnorm < best_residual) {
      best_residual = rnorm;
      best_state = psi;
      best_energy = energy;
    }
    // The first two corrections away from the c -> infinity start are
    // expected to move E by O(1); only later jumps count.
    if (k >= 3 && !report.structure_changed &&
        std::abs(report.energy_history[k] - report.energy_history[k - 1]) >
            config.structure_change_threshold) {
      report.structure_changed = true;
      report.structure_change_iteration = k;
    }
    report.iterations = k;

    report.effective_tolerance =
        std::max(config.tol_residual,
                 kRoundingUlps * std::numeric_limits<double>::epsilon() *
                     residual_scale(psi, params, energy));
    if (rnorm <= report.effective_tolerance) {
      report.status = NewtonStatus::kConverged;
      break;
    }
    if (k >= config.max_iter) {
      report.status = NewtonStatus::kNoConvergence;
      report.message = "max_iter reached";
      break;
    }

    std::vector<double> next(psi.values().begin(), psi.values().end());
    double next_energy = energy;
    try {
      const std::vector<double> a =
          jacobian_solve(psi, params, energy, r, config.pivot_tolerance);
      if (config.update == EnergyUpdate::kEstimateThenStep) {
        for (std::size_t i = 0; i < n; ++i) next[i] -= a[i];
      } else {
        const std::vector<double> b = jacobian_solve(
            psi, params, energy, psi.values(), config.pivot_tolerance);
        const double constraint = 0.5 * (psi.norm_squared() - 1.0);
        const double denom = dot(psi.values(), b);
        if (denom == 0.0) {
          throw Error(ErrorKind::kSingularJacobian,
                      "bordered system has a vanishing Schur complement");
        }
        const double delta_e = (dot(psi.values(), a) - constraint) / denom;
        for (std::size_t i = 0; i < n; ++i) next[i] += -a[i] + delta_e * b[i];
        next_energy = energy + delta_e;
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kSingularJacobian) throw;
      report.status = NewtonStatus::kSingularJacobian;
      report.message = e.what();
      break;
    }

    if (!all_finite(next) || !std::isfinite(next_energy)) {
      report.status = NewtonStatus::kNoConvergence;
      report.message = "iterate became non-finite";
      break;
    }
    LatticeState stepped(std::move(next), psi.boundary());
    if (config.renormalize) {
      if (stepped.norm_squared() == 0.0) {
        report.status = NewtonStatus::kNoConvergence;
        report.message = "iterate collapsed to zero";
        break;
      }
      stepped = normalize(stepped);
    }
    psi = std::move(stepped);
    energy = next_energy;
  }

  report.converged = report.status == NewtonStatus::kConverged;
  NewtonResult result{report.converged ? psi : best_state,
                      report.converged ? energy : best_energy,
                      std::move(report)};
  result.report.final_counts = count_pattern(quantize(result.state));
  result.report.final_norm = result.state.norm_squared();
  result.report.final_residual =
      max_abs_residual(result.state, params, result.energy);
  return result;
}

std::vector<SweepRecord> sweep_c(const LatticeState& initial,
                                 Boundary boundary,
                                 std::span<const double> c_values,
                                 const NewtonConfig& config,
                                 std::vector<LatticeState>* final_states) {
  const bool ascending = std::is_sorted(c_values.begin(), c_values.end());
  const bool descending = std::is_sorted(c_values.begin(), c_values.end(),
                                         std::greater<>());
  if (!ascending && !descending) {
    throw Error(ErrorKind::kInvalidArgument, "c values must be monotone");
  }
  std::vector<SweepRecord> records;
  records.reserve(c_values.size());
  LatticeState start = initial;
  for (double c : c_values) {
    const NewtonResult result = newton_solve(start, {c, boundary}, config);
    SweepRecord rec;
    rec.c = c;
    rec.energy = result.energy;
    rec.converged = result.report.converged;
    rec.status = result.report.status;
    rec.structure_changed = result.report.structure_changed;
    rec.iterations = result.report.iterations;
    rec.counts = result.report.final_counts;
    rec.max_amplitude = result.state.max_abs();
    records.push_back(rec);
    if (final_states) final_states->push_back(result.state);
    if (result.report.converged) start = result.state;
  }
  return records;
}

}  // namespace dnse
