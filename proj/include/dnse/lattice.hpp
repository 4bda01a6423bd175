#pragma once

// Lattice states and the stationary discrete nonlinear Schroedinger equation
//
//   -psi[i-1] + 2 psi[i] - psi[i+1] - c psi[i]^3 = E psi[i]
//
// together with its Hamiltonian and the exact symmetry transforms.

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "dnse/boundary.hpp"

namespace dnse {

/// Real amplitudes on N >= 1 sites plus a boundary tag. Immutable once built.
class LatticeState {
 public:
  /// Throws kInvalidArgument for an empty or non-finite amplitude vector.
  LatticeState(std::vector<double> values, Boundary boundary);

  static LatticeState zeros(std::size_t n, Boundary boundary);

  std::size_t size() const noexcept { return values_.size(); }
  Boundary boundary() const noexcept { return boundary_; }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  double norm_squared() const noexcept;
  double max_abs() const noexcept;
  double sum() const noexcept;
  bool is_normalized(double tol = 1e-12) const noexcept;

  friend bool operator==(const LatticeState&, const LatticeState&) = default;

 private:
  std::vector<double> values_;
  Boundary boundary_;
};

struct ModelParams {
  double c = 0.0;
  Boundary boundary = Boundary::kPeriodic;
};

/// Scales every amplitude by the same positive factor so that sum psi^2 = 1.
/// Throws kZeroState for the all-zero state.
LatticeState normalize(const LatticeState& state);

/// Component i of the DNSE residual; zero everywhere at a stationary state.
/// Throws kInvalidArgument if state and params disagree on the boundary.
std::vector<double> residual(const LatticeState& state,
                             const ModelParams& params, double energy);

double max_abs_residual(const LatticeState& state, const ModelParams& params,
                        double energy);

/// H = sum (psi[i] - psi[i+1])^2 - (c/2) sum psi^4 - E sum psi^2.
/// Open chains include the two bonds to the zero padding, which keeps
/// gradient() the exact derivative of this function.
double hamiltonian(const LatticeState& state, const ModelParams& params,
                   double energy);

/// dH/dpsi[i]. Always exactly 2 * residual; the Newton step is unaffected by
/// the constant since it cancels against the Hessian.
std::vector<double> gradient(const LatticeState& state,
                             const ModelParams& params, double energy);

/// x[n] = (-1)^n psi[n]. Maps the quantum equation with eigenvalue E onto the
/// nonlinear-oscillator equation with eigenvalue e = 4 - E.
/// Throws kOddPeriodicLattice for periodic rings with odd N.
LatticeState stagger(const LatticeState& state);

/// Residual of the coupled-oscillator equation
///   -x[i-1] + 2 x[i] - x[i+1] + c x[i]^3 - e x[i].
std::vector<double> oscillator_residual(const LatticeState& state,
                                        const ModelParams& params,
                                        double oscillator_eigenvalue);

inline double oscillator_eigenvalue(double energy) { return 4.0 - energy; }

/// Similarity transform (psi, c) -> (beta psi, c / beta^2). Residuals scale by
/// beta, so solutions map onto solutions; the norm scales by beta^2.
/// Throws kInvalidArgument unless beta > 0.
std::pair<LatticeState, ModelParams> rescale(const LatticeState& state,
                                             const ModelParams& params,
                                             double beta);

/// Cyclic shift: result[i] = state[(i + shift) mod N].
LatticeState rotate(const LatticeState& state, std::ptrdiff_t shift);

}  // namespace dnse
