#pragma once

// Newton-Raphson continuation of strong-coupling patterns to finite coupling.
//
// Each iteration estimates E from the current iterate, takes the step
//   psi <- psi - J^{-1} r(psi, E)
// with the O(N) cyclic tridiagonal Jacobian J = d r / d psi, and renormalizes.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dnse/lattice.hpp"
#include "dnse/patterns.hpp"

namespace dnse {

/// d r / d psi for N >= 3: diagonal 2 - E - 3 c psi^2, -1 on both
/// off-diagonals, and -1 in the two corners iff periodic. O(N) storage.
struct JacobianMatrix {
  std::vector<double> diag;
  Boundary boundary = Boundary::kPeriodic;

  static constexpr double kOffDiagonal = -1.0;

  std::size_t size() const noexcept { return diag.size(); }
  bool has_corners() const noexcept { return boundary == Boundary::kPeriodic; }
  std::vector<double> multiply(std::span<const double> x) const;
};

/// Which formula supplies E at each iteration.
enum class EnergyEstimator {
  // -c sum psi^3 / sum psi. Rayleigh stands in when |sum psi| is below
  // sum_threshold, or when cancellation in the sums would leave rounding
  // error in E above a quarter of the residual target.
  kSumRatio,
  kRayleigh,  // psi . (L psi - c psi^3) / psi . psi
};

enum class EnergyUpdate {
  kEstimateThenStep,  // estimate E, Newton step in psi at fixed E
  kBordered,          // joint Newton step in (psi, E) with sum psi^2 = 1
};

struct NewtonConfig {
  /// Max-norm residual target. At strong coupling the residual's own rounding
  /// error can exceed it; the loop then stops at a floor of 32 ulps of the
  /// largest residual term instead (see NewtonReport::effective_tolerance).
  double tol_residual = 1e-12;
  int max_iter = 200;
  double structure_change_threshold = 1.0;
  /// |sum psi| below this triggers the Rayleigh fallback. Unset means
  /// 1e-8 * sqrt(N).
  std::optional<double> sum_threshold;
  double pivot_tolerance = 1e-14;
  bool renormalize = true;
  EnergyEstimator estimator = EnergyEstimator::kSumRatio;
  EnergyUpdate update = EnergyUpdate::kEstimateThenStep;

  double sum_threshold_for(std::size_t n) const;
};

enum class NewtonStatus { kConverged, kNoConvergence, kSingularJacobian };

std::string_view to_string(NewtonStatus status);

struct NewtonReport {
  int iterations = 0;
  std::vector<double> energy_history;
  std::vector<double> residual_history;
  NewtonStatus status = NewtonStatus::kNoConvergence;
  bool converged = false;
  bool structure_changed = false;
  std::optional<int> structure_change_iteration;
  PatternCounts initial_counts;
  PatternCounts final_counts;
  double final_norm = 0.0;
  double final_residual = 0.0;
  /// max(tol_residual, rounding floor) at the last iteration.
  double effective_tolerance = 0.0;
  std::string message;
};

struct NewtonResult {
  /// Converged state, or the iterate with the smallest residual on failure.
  LatticeState state;
  double energy = 0.0;
  NewtonReport report;

  bool ok() const noexcept { return report.converged; }
};

/// E = -c sum psi^3 / sum psi. Periodic only. Throws kSumTooSmall when
/// |sum psi| < sum_threshold and kInvalidArgument for open chains.
double energy_estimate(const LatticeState& state, const ModelParams& params,
                       double sum_threshold);
double energy_estimate(const LatticeState& state, const ModelParams& params);

/// E = psi . (L psi - c psi^3) / psi . psi. Throws kZeroState.
double rayleigh_energy(const LatticeState& state, const ModelParams& params);

/// Throws kLatticeTooSmall for N < 3.
JacobianMatrix assemble_jacobian(const LatticeState& state,
                                 const ModelParams& params, double energy);

/// Solves J x = rhs in O(N): banded elimination with partial pivoting plus a
/// Sherman-Morrison correction for the periodic corners. Throws
/// kSingularJacobian when a pivot drops below pivot_tolerance times the
/// matrix scale.
std::vector<double> solve_linear(const JacobianMatrix& jacobian,
                                 std::span<const double> rhs,
                                 double pivot_tolerance = 1e-14);

/// Never throws for convergence failures; inspect report.status. The initial
/// state is normalized before iterating. Open chains always use the Rayleigh
/// estimator.
NewtonResult newton_solve(const LatticeState& initial,
                          const ModelParams& params,
                          const NewtonConfig& config = {});

struct SweepRecord {
  double c = 0.0;
  double energy = 0.0;
  bool converged = false;
  NewtonStatus status = NewtonStatus::kNoConvergence;
  bool structure_changed = false;
  int iterations = 0;
  PatternCounts counts;
  double max_amplitude = 0.0;
};

/// Solves at each c in order, warm-starting from the last converged state.
/// Failures are recorded and the sweep continues. `final_states`, when given,
/// receives the state reached at every c.
std::vector<SweepRecord> sweep_c(const LatticeState& initial,
                                 Boundary boundary,
                                 std::span<const double> c_values,
                                 const NewtonConfig& config = {},
                                 std::vector<LatticeState>* final_states =
                                     nullptr);

}  // namespace dnse
