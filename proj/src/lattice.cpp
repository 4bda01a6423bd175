#include "dnse/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "dnse/error.hpp"
#include "dnse/kernels.hpp"

namespace dnse {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
    case ErrorKind::kZeroState: return "ZeroState";
    case ErrorKind::kOddPeriodicLattice: return "OddPeriodicLattice";
    case ErrorKind::kBadCharacter: return "BadCharacter";
    case ErrorKind::kEmptyPattern: return "EmptyPattern";
    case ErrorKind::kAllZero: return "AllZero";
    case ErrorKind::kSumTooSmall: return "SumTooSmall";
    case ErrorKind::kLatticeTooSmall: return "LatticeTooSmall";
    case ErrorKind::kSingularJacobian: return "SingularJacobian";
    case ErrorKind::kNoConvergence: return "NoConvergence";
    case ErrorKind::kEscapedOrbit: return "EscapedOrbit";
    case ErrorKind::kNotLocalized: return "NotLocalized";
    case ErrorKind::kWindowTouchesPeak: return "WindowTouchesPeak";
    case ErrorKind::kZeroAmplitudeInWindow: return "ZeroAmplitudeInWindow";
    case ErrorKind::kEmptyRegion: return "EmptyRegion";
    case ErrorKind::kIo: return "Io";
  }
  return "Unknown";
}

std::string_view to_string(Boundary boundary) {
  return boundary == Boundary::kPeriodic ? "periodic" : "open";
}

Boundary parse_boundary(std::string_view text) {
  if (text == "periodic" || text == "pbc") return Boundary::kPeriodic;
  if (text == "open") return Boundary::kOpen;
  throw Error(ErrorKind::kInvalidArgument,
              "unknown boundary '" + std::string(text) + "'");
}

LatticeState::LatticeState(std::vector<double> values, Boundary boundary)
    : values_(std::move(values)), boundary_(boundary) {
  if (values_.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "lattice needs at least one site");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw Error(ErrorKind::kInvalidArgument,
                  "non-finite amplitude at site " + std::to_string(i), i);
    }
  }
}

LatticeState LatticeState::zeros(std::size_t n, Boundary boundary) {
  return LatticeState(std::vector<double>(n, 0.0), boundary);
}

double LatticeState::norm_squared() const noexcept {
  return std::inner_product(values_.begin(), values_.end(), values_.begin(),
                            0.0);
}

double LatticeState::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double LatticeState::sum() const noexcept {
  return std::accumulate(values_.begin(), values_.end(), 0.0);
}

bool LatticeState::is_normalized(double tol) const noexcept {
  return std::abs(norm_squared() - 1.0) <= tol;
}

namespace {

void check_boundary(const LatticeState& state, const ModelParams& params) {
  if (state.boundary() != params.boundary) {
    throw Error(ErrorKind::kInvalidArgument,
                "state is " + std::string(to_string(state.boundary())) +
                    " but parameters are " +
                    std::string(to_string(params.boundary)));
  }
}

}  // namespace

LatticeState normalize(const LatticeState& state) {
  const double norm2 = state.norm_squared();
  if (norm2 == 0.0) {
    throw Error(ErrorKind::kZeroState, "cannot normalize the zero state");
  }
  const double inv = 1.0 / std::sqrt(norm2);
  std::vector<double> out(state.values().begin(), state.values().end());
  for (double& v : out) v *= inv;
  return LatticeState(std::move(out), state.boundary());
}

std::vector<double> residual(const LatticeState& state,
                             const ModelParams& params, double energy) {
  check_boundary(state, params);
  std::vector<double> out(state.size());
  kernels::residual<double>(state.values(), state.boundary(), params.c, energy,
                            out);
  return out;
}

double max_abs_residual(const LatticeState& state, const ModelParams& params,
                        double energy) {
  double m = 0.0;
  for (double r : residual(state, params, energy)) m = std::max(m, std::abs(r));
  return m;
}

double hamiltonian(const LatticeState& state, const ModelParams& params,
                   double energy) {
  check_boundary(state, params);
  const auto psi = state.values();
  double quartic = 0.0;
  for (double p : psi) quartic += p * p * p * p;
  return kernels::kinetic<double>(psi, state.boundary()) -
         0.5 * params.c * quartic - energy * state.norm_squared();
}

std::vector<double> gradient(const LatticeState& state,
                             const ModelParams& params, double energy) {
  std::vector<double> g = residual(state, params, energy);
  for (double& v : g) v *= 2.0;
  return g;
}

LatticeState stagger(const LatticeState& state) {
  if (state.boundary() == Boundary::kPeriodic && state.size() % 2 == 1) {
    throw Error(ErrorKind::kOddPeriodicLattice,
                "staggering a periodic ring needs even N, got " +
                    std::to_string(state.size()));
  }
  std::vector<double> out(state.values().begin(), state.values().end());
  for (std::size_t i = 1; i < out.size(); i += 2) out[i] = -out[i];
  return LatticeState(std::move(out), state.boundary());
}

std::vector<double> oscillator_residual(const LatticeState& state,
                                        const ModelParams& params,
                                        double oscillator_eigenvalue) {
  check_boundary(state, params);
  // Same stencil with the cubic term's sign flipped.
  std::vector<double> out(state.size());
  kernels::residual<double>(state.values(), state.boundary(), -params.c,
                            oscillator_eigenvalue, out);
  return out;
}

std::pair<LatticeState, ModelParams> rescale(const LatticeState& state,
                                             const ModelParams& params,
                                             double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw Error(ErrorKind::kInvalidArgument, "rescale needs beta > 0");
  }
  std::vector<double> out(state.values().begin(), state.values().end());
  for (double& v : out) v *= beta;
  return {LatticeState(std::move(out), state.boundary()),
          ModelParams{params.c / (beta * beta), params.boundary}};
}

LatticeState rotate(const LatticeState& state, std::ptrdiff_t shift) {
  const auto n = static_cast<std::ptrdiff_t>(state.size());
  const std::ptrdiff_t s = ((shift % n) + n) % n;
  std::vector<double> out(state.values().begin(), state.values().end());
  std::rotate(out.begin(), out.begin() + s, out.end());
  return LatticeState(std::move(out), state.boundary());
}

}  // namespace dnse
