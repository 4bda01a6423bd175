#pragma once

// Scalar-generic lattice kernels. They are instantiated with double for the
// solver and with a 100-digit binary float for high-precision polishing, so
// everything here is written against `Real` with ADL-friendly math calls.

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "dnse/boundary.hpp"
#include "dnse/error.hpp"

namespace dnse::kernels {

template <class Real>
Real left_neighbor(std::span<const Real> psi, Boundary bc, std::size_t i) {
  if (i > 0) return psi[i - 1];
  return bc == Boundary::kPeriodic ? psi[psi.size() - 1] : Real(0);
}

template <class Real>
Real right_neighbor(std::span<const Real> psi, Boundary bc, std::size_t i) {
  if (i + 1 < psi.size()) return psi[i + 1];
  return bc == Boundary::kPeriodic ? psi[0] : Real(0);
}

/// out[i] = -psi[i-1] + 2 psi[i] - psi[i+1] - c psi[i]^3 - e psi[i]
template <class Real>
void residual(std::span<const Real> psi, Boundary bc, const Real& c,
              const Real& e, std::span<Real> out) {
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const Real& p = psi[i];
    out[i] = -left_neighbor(psi, bc, i) + 2 * p - right_neighbor(psi, bc, i) -
             c * p * p * p - e * p;
  }
}

/// psi . (L psi) where L is the discrete Laplacian stencil (-1, 2, -1).
/// Equals the sum of squared bond differences, including the bonds to the
/// zero padding for open chains.
template <class Real>
Real kinetic(std::span<const Real> psi, Boundary bc) {
  Real sum(0);
  for (std::size_t i = 0; i < psi.size(); ++i) {
    sum += psi[i] * (2 * psi[i] - left_neighbor(psi, bc, i) -
                     right_neighbor(psi, bc, i));
  }
  return sum;
}

/// Solves a general tridiagonal system with partial pivoting (row
/// interchanges, one extra fill-in super-diagonal). `lower[i]` couples row
/// i+1 to column i, `upper[i]` couples row i to column i+1; both have n-1
/// entries. A pivot below `pivot_floor` raises kSingularJacobian.
template <class Real>
std::vector<Real> solve_tridiagonal(std::vector<Real> lower,
                                    std::vector<Real> diag,
                                    std::vector<Real> upper,
                                    std::vector<Real> rhs,
                                    const Real& pivot_floor) {
  using std::abs;
  const std::size_t n = diag.size();
  if (n == 0) return {};
  std::vector<Real> fill(n > 2 ? n - 2 : 0, Real(0));

  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (abs(diag[i]) >= abs(lower[i])) {
      if (abs(diag[i]) <= pivot_floor) {
        throw Error(ErrorKind::kSingularJacobian,
                    "vanishing pivot at row " + std::to_string(i), i);
      }
      const Real factor = lower[i] / diag[i];
      diag[i + 1] -= factor * upper[i];
      rhs[i + 1] -= factor * rhs[i];
    } else {
      // Swap rows i and i+1.
      const Real factor = diag[i] / lower[i];
      diag[i] = lower[i];
      const Real old_diag_next = diag[i + 1];
      diag[i + 1] = upper[i] - factor * old_diag_next;
      if (i + 2 < n) {
        fill[i] = upper[i + 1];
        upper[i + 1] = -factor * fill[i];
      }
      upper[i] = old_diag_next;
      std::swap(rhs[i], rhs[i + 1]);
      rhs[i + 1] -= factor * rhs[i];
    }
  }
  if (abs(diag[n - 1]) <= pivot_floor) {
    throw Error(ErrorKind::kSingularJacobian,
                "vanishing pivot at row " + std::to_string(n - 1), n - 1);
  }

  std::vector<Real> x(n);
  x[n - 1] = rhs[n - 1] / diag[n - 1];
  if (n >= 2) x[n - 2] = (rhs[n - 2] - upper[n - 2] * x[n - 1]) / diag[n - 2];
  for (std::size_t k = n >= 2 ? n - 2 : 0; k-- > 0;) {
    x[k] = (rhs[k] - upper[k] * x[k + 1] - fill[k] * x[k + 2]) / diag[k];
  }
  return x;
}

/// Symmetric tridiagonal matrix with a constant off-diagonal value and, for
/// periodic rings, the same value in the two corners. Requires n >= 3 when
/// periodic.
template <class Real>
std::vector<Real> solve_symmetric_cyclic(std::span<const Real> diag,
                                         const Real& off, bool periodic,
                                         std::span<const Real> rhs,
                                         const Real& relative_pivot_tol) {
  using std::abs;
  const std::size_t n = diag.size();
  Real scale = abs(off);
  for (const Real& d : diag) {
    if (abs(d) + 2 * abs(off) > scale) scale = abs(d) + 2 * abs(off);
  }
  const Real pivot_floor = relative_pivot_tol * scale;

  std::vector<Real> lower(n > 0 ? n - 1 : 0, off);
  std::vector<Real> upper(n > 0 ? n - 1 : 0, off);
  std::vector<Real> d(diag.begin(), diag.end());
  std::vector<Real> b(rhs.begin(), rhs.end());
  if (!periodic) {
    return solve_tridiagonal(std::move(lower), std::move(d), std::move(upper),
                             std::move(b), pivot_floor);
  }

  // Sherman-Morrison: A = T + u v^T with u = (g, 0, ..., 0, off),
  // v = (1, 0, ..., 0, off / g).
  Real g = -d[0];
  if (abs(g) <= pivot_floor) g = scale;
  d[0] -= g;
  d[n - 1] -= off * off / g;

  std::vector<Real> u(n, Real(0));
  u[0] = g;
  u[n - 1] = off;
  const std::vector<Real> y =
      solve_tridiagonal(lower, d, upper, std::move(b), pivot_floor);
  const std::vector<Real> z = solve_tridiagonal(
      std::move(lower), std::move(d), std::move(upper), std::move(u),
      pivot_floor);

  const Real v_dot_y = y[0] + off / g * y[n - 1];
  const Real v_dot_z = z[0] + off / g * z[n - 1];
  const Real denom = 1 + v_dot_z;
  if (abs(denom) <= relative_pivot_tol * (1 + abs(v_dot_z))) {
    throw Error(ErrorKind::kSingularJacobian,
                "rank-one corner correction is singular", 0);
  }
  const Real ratio = v_dot_y / denom;
  std::vector<Real> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = y[i] - ratio * z[i];
  return x;
}

}  // namespace dnse::kernels
