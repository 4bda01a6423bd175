#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "support.hpp"

#include "dnse/lattice.hpp"

using namespace dnse;
using support::error_kind_of;
using support::to_vector;

TEST_CASE("lattice state rejects empty and non-finite amplitudes") {
  CHECK(error_kind_of([] { LatticeState({}, Boundary::kPeriodic); }) ==
        ErrorKind::kInvalidArgument);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK(error_kind_of([&] { LatticeState({1.0, nan}, Boundary::kOpen); }) ==
        ErrorKind::kInvalidArgument);
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(error_kind_of([&] { LatticeState({inf}, Boundary::kOpen); }) ==
        ErrorKind::kInvalidArgument);
}

TEST_CASE("boundary names round-trip") {
  CHECK(parse_boundary("periodic") == Boundary::kPeriodic);
  CHECK(parse_boundary("pbc") == Boundary::kPeriodic);
  CHECK(parse_boundary("open") == Boundary::kOpen);
  CHECK(to_string(Boundary::kOpen) == "open");
  CHECK(error_kind_of([] { parse_boundary("twisted"); }) ==
        ErrorKind::kInvalidArgument);
}

TEST_CASE("normalize") {
  const LatticeState s({3.0, 4.0}, Boundary::kPeriodic);
  const LatticeState u = normalize(s);
  CHECK(u[0] == doctest::Approx(0.6));
  CHECK(u[1] == doctest::Approx(0.8));
  CHECK(u.is_normalized());
  CHECK(error_kind_of([] {
          normalize(LatticeState::zeros(4, Boundary::kPeriodic));
        }) == ErrorKind::kZeroState);

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto x = support::random_state(1 + trial, Boundary::kOpen, rng);
    CHECK(std::abs(normalize(x).norm_squared() - 1.0) < 1e-14);
  }
}

TEST_CASE("residual of small known states") {
  // Uniform 1/sqrt(3) ring, c = 30: the Laplacian vanishes and
  // -c psi^2 = -10, so E = -10 is exact.
  const double a = 1.0 / std::sqrt(3.0);
  const LatticeState uniform({a, a, a}, Boundary::kPeriodic);
  CHECK(max_abs_residual(uniform, {30.0, Boundary::kPeriodic}, -10.0) < 1e-14);

  // Single site on an open chain: 2 psi - c psi^3 - E psi with psi = 1.
  const LatticeState one({1.0}, Boundary::kOpen);
  CHECK(residual(one, {5.0, Boundary::kOpen}, 0.0)[0] == doctest::Approx(-3.0));
  CHECK(max_abs_residual(one, {5.0, Boundary::kOpen}, 2.0 - 5.0) == 0.0);

  // Mismatched boundary tags.
  CHECK(error_kind_of([&] {
          residual(one, {5.0, Boundary::kPeriodic}, 0.0);
        }) == ErrorKind::kInvalidArgument);
}

TEST_CASE("residual matches the reference stencil on random states") {
  std::mt19937_64 rng(1);
  for (Boundary bc : {Boundary::kPeriodic, Boundary::kOpen}) {
    for (std::size_t n : {1u, 2u, 3u, 7u, 40u}) {
      const LatticeState s = support::random_state(n, bc, rng);
      const double c = 7.5;
      const double e = -1.25;
      const auto ref = oracle::residual(to_vector(s), c, e,
                                        bc == Boundary::kPeriodic);
      CHECK(oracle::max_abs_diff(residual(s, {c, bc}, e), ref) < 1e-14);
    }
  }
}

TEST_CASE("hamiltonian matches the bond-sum reference") {
  // Open single spot (1, 0, 0): bonds to the left padding and to site 1.
  const LatticeState spot({1.0, 0.0, 0.0}, Boundary::kOpen);
  CHECK(hamiltonian(spot, {0.0, Boundary::kOpen}, 0.0) == doctest::Approx(2.0));

  const double a = 1.0 / std::sqrt(3.0);
  const LatticeState uniform({a, a, a}, Boundary::kPeriodic);
  // 0 - (c/2)(1/3) - E with c = 30, E = -10.
  CHECK(hamiltonian(uniform, {30.0, Boundary::kPeriodic}, -10.0) ==
        doctest::Approx(5.0));

  std::mt19937_64 rng(2);
  for (Boundary bc : {Boundary::kPeriodic, Boundary::kOpen}) {
    const LatticeState s = support::random_state(17, bc, rng);
    CHECK(hamiltonian(s, {3.0, bc}, 0.7) ==
          doctest::Approx(oracle::hamiltonian(to_vector(s), 3.0, 0.7,
                                              bc == Boundary::kPeriodic))
              .epsilon(1e-13));
  }
}

TEST_CASE("gradient is twice the residual and matches finite differences") {
  std::mt19937_64 rng(3);
  for (Boundary bc : {Boundary::kPeriodic, Boundary::kOpen}) {
    const bool periodic = bc == Boundary::kPeriodic;
    for (int trial = 0; trial < 20; ++trial) {
      const LatticeState s = support::random_state(3 + trial, bc, rng);
      const double c = 10.0 * trial;
      const double e = -0.5 * trial;
      const auto g = gradient(s, {c, bc}, e);
      const auto r = residual(s, {c, bc}, e);
      for (std::size_t i = 0; i < g.size(); ++i) CHECK(g[i] == 2.0 * r[i]);
      const auto fd = oracle::central_difference(
          [&](const std::vector<double>& x) {
            return oracle::hamiltonian(x, c, e, periodic);
          },
          to_vector(s), 1e-5);
      CHECK(oracle::max_abs_diff(g, fd) < 1e-6 * (1.0 + oracle::max_abs(g)));
    }
  }
}

TEST_CASE("translation covariance and sign symmetry") {
  std::mt19937_64 rng(4);
  const LatticeState s = support::random_state(12, Boundary::kPeriodic, rng);
  const ModelParams p{4.0, Boundary::kPeriodic};
  const auto r = residual(s, p, -0.3);
  for (std::ptrdiff_t k : {-13, -1, 0, 1, 5, 12, 25}) {
    const auto rr = residual(rotate(s, k), p, -0.3);
    const auto expect = to_vector(rotate(LatticeState(r, Boundary::kPeriodic), k));
    CHECK(oracle::max_abs_diff(rr, expect) < 1e-14);
  }
  std::vector<double> neg = to_vector(s);
  for (double& v : neg) v = -v;
  const auto rn = residual(LatticeState(neg, Boundary::kPeriodic), p, -0.3);
  for (std::size_t i = 0; i < r.size(); ++i) CHECK(rn[i] == -r[i]);
}

TEST_CASE("rotate") {
  const LatticeState s({0.0, 1.0, 2.0, 3.0}, Boundary::kPeriodic);
  CHECK(to_vector(rotate(s, 1)) == std::vector<double>{1.0, 2.0, 3.0, 0.0});
  CHECK(to_vector(rotate(s, -1)) == std::vector<double>{3.0, 0.0, 1.0, 2.0});
  CHECK(rotate(s, 4) == s);
}

TEST_CASE("staggering maps the quantum residual onto the oscillator residual") {
  std::mt19937_64 rng(5);
  for (Boundary bc : {Boundary::kPeriodic, Boundary::kOpen}) {
    for (std::size_t n : {2u, 4u, 10u}) {
      const LatticeState s = support::random_state(n, bc, rng);
      const ModelParams p{6.0, bc};
      const double e = -0.8;
      const auto r = residual(s, p, e);
      const auto osc = oscillator_residual(stagger(s), p, oscillator_eigenvalue(e));
      for (std::size_t i = 0; i < n; ++i) {
        const double sign = i % 2 == 0 ? 1.0 : -1.0;
        CHECK(osc[i] == doctest::Approx(-sign * r[i]).epsilon(1e-13));
      }
    }
  }
  // Open chains of odd length stagger fine; periodic ones are rejected.
  CHECK_NOTHROW(stagger(LatticeState({1.0, 2.0, 3.0}, Boundary::kOpen)));
  CHECK(error_kind_of([] {
          stagger(LatticeState({1.0, 2.0, 3.0}, Boundary::kPeriodic));
        }) == ErrorKind::kOddPeriodicLattice);
  CHECK(oscillator_eigenvalue(-0.4) == doctest::Approx(4.4));
}

TEST_CASE("rescaling multiplies the residual by beta") {
  std::mt19937_64 rng(6);
  const LatticeState s = support::random_state(9, Boundary::kPeriodic, rng);
  const ModelParams p{12.0, Boundary::kPeriodic};
  const auto r = residual(s, p, -2.0);
  for (double beta : {0.1, 0.5, 1.0, 3.0, 10.0}) {
    const auto [t, q] = rescale(s, p, beta);
    CHECK(q.c == doctest::Approx(12.0 / (beta * beta)));
    CHECK(t.norm_squared() == doctest::Approx(beta * beta * s.norm_squared()));
    const auto rt = residual(t, q, -2.0);
    for (std::size_t i = 0; i < r.size(); ++i) {
      CHECK(std::abs(rt[i] - beta * r[i]) < 1e-12);
    }
  }
  CHECK(error_kind_of([&] { rescale(s, p, 0.0); }) ==
        ErrorKind::kInvalidArgument);
  CHECK(error_kind_of([&] { rescale(s, p, -1.0); }) ==
        ErrorKind::kInvalidArgument);
}

TEST_CASE("large lattices stay linear in memory and time") {
  std::vector<double> v(1'000'000, 0.0);
  v[0] = 1.0;
  const LatticeState s(std::move(v), Boundary::kPeriodic);
  const auto r = residual(s, {10.0, Boundary::kPeriodic}, 2.0 - 10.0);
  CHECK(r[1] == -1.0);
  CHECK(r[999'999] == -1.0);
  CHECK(r[0] == 0.0);
}
