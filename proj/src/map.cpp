#include "dnse/map.hpp"

#include "dnse/error.hpp"

namespace dnse {

MapOrbit iterate_map(const MapState& seed, double energy, double c,
                     std::size_t length, const OrbitOptions& options) {
  if (length == 0) {
    throw Error(ErrorKind::kInvalidArgument, "orbit length must be >= 1");
  }
  if (options.stride == 0) {
    throw Error(ErrorKind::kInvalidArgument, "orbit stride must be >= 1");
  }
  auto escapes = [&](const MapState& s) {
    return !(std::abs(s.psi) <= options.escape_bound &&
             std::abs(s.z) <= options.escape_bound);
  };

  MapOrbit orbit;
  orbit.points.reserve(length / options.stride + 1);
  orbit.steps.reserve(length / options.stride + 1);
  MapState s = seed;
  for (std::size_t i = 0; i < length; ++i) {
    if (i > 0) s = map_step(s, energy, c);
    const bool out = escapes(s);
    if (i % options.stride == 0 || out) {
      orbit.points.push_back(s);
      orbit.steps.push_back(i);
    }
    if (out) {
      orbit.escaped = true;
      orbit.escape_index = i;
      break;
    }
  }
  return orbit;
}

MapState lattice_seed(const LatticeState& state) {
  const double prev =
      state.boundary() == Boundary::kPeriodic ? state[state.size() - 1] : 0.0;
  return {state[0], state[0] - prev};
}

LatticeState lattice_from_orbit(const MapOrbit& orbit) {
  if (orbit.escaped) {
    throw Error(ErrorKind::kEscapedOrbit,
                "orbit escaped at step " +
                    std::to_string(orbit.escape_index.value_or(0)));
  }
  std::vector<double> values;
  values.reserve(orbit.points.size());
  for (const MapState& s : orbit.points) values.push_back(s.psi);
  return LatticeState(std::move(values), Boundary::kOpen);
}

}  // namespace dnse
