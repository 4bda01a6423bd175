#include "dnse/precise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

#include "dnse/error.hpp"
#include "dnse/kernels.hpp"
#include "dnse/map.hpp"

namespace dnse::precise {

namespace {

using Real300 = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<300>>;
using Real1000 = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<kMaxReplayDigits>>;

template <class R>
R dot(const std::vector<R>& a, const std::vector<R>& b) {
  R acc(0);
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

template <class R>
R max_abs(const std::vector<R>& v) {
  R m(0);
  for (const R& x : v) m = std::max(m, R(abs(x)));
  return m;
}

template <class R>
struct Polished {
  std::vector<R> psi;
  R energy;
  R residual;
  int iterations = 0;
};

// Bordered Newton on (psi, E) with (psi.psi - 1) / 2 = 0.
template <class R>
Polished<R> polish_in(const LatticeState& state, const ModelParams& params,
                      double energy, const R& target, int max_iter) {
  const std::size_t n = state.size();
  if (n < 3) {
    throw Error(ErrorKind::kLatticeTooSmall, "polishing needs N >= 3");
  }
  const bool periodic = params.boundary == Boundary::kPeriodic;
  const R c(params.c);
  // Pivots are relative to the diagonal scale, which grows with c.
  const R pivot_tol = target * 1e-10;

  Polished<R> out;
  out.psi.assign(state.values().begin(), state.values().end());
  out.energy = R(energy);

  std::vector<R> r(n);
  std::vector<R> diag(n);
  for (int it = 0;; ++it) {
    kernels::residual<R>(out.psi, params.boundary, c, out.energy, r);
    out.residual = max_abs(r);
    const R constraint = (dot(out.psi, out.psi) - 1) / 2;
    out.iterations = it;
    if (out.residual <= target && abs(constraint) <= target) return out;
    if (it >= max_iter) {
      throw Error(ErrorKind::kNoConvergence,
                  "extended-precision polish stalled at residual " +
                      std::to_string(out.residual.template convert_to<double>()));
    }
    for (std::size_t i = 0; i < n; ++i) {
      diag[i] = 2 - out.energy - 3 * c * out.psi[i] * out.psi[i];
    }
    const std::vector<R> a = kernels::solve_symmetric_cyclic<R>(
        diag, R(-1), periodic, r, pivot_tol);
    const std::vector<R> b = kernels::solve_symmetric_cyclic<R>(
        diag, R(-1), periodic, out.psi, pivot_tol);
    const R delta_e = (dot(out.psi, a) - constraint) / dot(out.psi, b);
    for (std::size_t i = 0; i < n; ++i) out.psi[i] += -a[i] + delta_e * b[i];
    out.energy += delta_e;
  }
}

template <class R>
void replay_in(const LatticeState& state, const ModelParams& params,
               double energy, int digits, MapReplay& replay) {
  // Leave 20 digits of headroom below the working precision.
  const R target = pow(R(10), -(digits - 20));
  const Polished<R> sol = polish_in<R>(state, params, energy, target, 60);
  const std::size_t n = state.size();
  const bool periodic = params.boundary == Boundary::kPeriodic;
  const R c(params.c);

  BasicMapState<R> s{sol.psi[0], sol.psi[0] - (periodic ? sol.psi[n - 1] : R(0))};
  const BasicMapState<R> seed = s;
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) s = map_step(s, sol.energy, c);
    const double dev = std::abs(s.psi.template convert_to<double>() - state[i]);
    replay.max_deviation = std::max(replay.max_deviation, dev);
  }
  s = map_step(s, sol.energy, c);
  if (periodic) {
    replay.closure_error = std::max(R(abs(s.psi - seed.psi)), R(abs(s.z - seed.z)))
                               .template convert_to<double>();
  } else {
    replay.closure_error = abs(s.psi).template convert_to<double>();
  }
  replay.digits = digits;
}

}  // namespace

PolishedSolution polish(const LatticeState& state, const ModelParams& params,
                        double energy, double target, int max_iter) {
  const Polished<Real> p = polish_in<Real>(state, params, energy, Real(target),
                                           max_iter);
  PolishedSolution out;
  out.psi = p.psi;
  out.energy = p.energy;
  out.boundary = params.boundary;
  out.residual = p.residual.convert_to<double>();
  out.iterations = p.iterations;
  return out;
}

int replay_digits_needed(const LatticeState& state, const ModelParams& params,
                         double energy) {
  double growth = 0.0;
  for (double v : state.values()) {
    growth += std::log10(std::max(1.0, std::abs(2.0 - energy - 3.0 * params.c * v * v)));
  }
  // 16 digits to resolve the double lattice, 20 of headroom.
  return static_cast<int>(std::ceil(growth)) + 36;
}

MapReplay replay_lattice_with_map(const LatticeState& state,
                                  const ModelParams& params, double energy) {
  const int needed = replay_digits_needed(state, params, energy);
  MapReplay replay;
  if (needed <= 100) {
    replay_in<Real>(state, params, energy, 100, replay);
  } else if (needed <= 300) {
    replay_in<Real300>(state, params, energy, 300, replay);
  } else if (needed <= kMaxReplayDigits) {
    replay_in<Real1000>(state, params, energy, kMaxReplayDigits, replay);
  } else {
    throw Error(ErrorKind::kInvalidArgument,
                "map replay would need " + std::to_string(needed) +
                    " digits; the limit is " + std::to_string(kMaxReplayDigits));
  }

  const std::size_t n = state.size();
  const MapOrbit plain = iterate_map(lattice_seed(state), energy, params.c, n);
  replay.double_precision_escaped = plain.escaped;
  if (plain.escaped) {
    replay.double_precision_deviation = std::numeric_limits<double>::infinity();
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      replay.double_precision_deviation =
          std::max(replay.double_precision_deviation,
                   std::abs(plain.points[i].psi - state[i]));
    }
  }
  return replay;
}

}  // namespace dnse::precise
