#pragma once

// The stationary equation read as a two-dimensional area-preserving map in
// (psi, Z), Z[i] = psi[i] - psi[i-1]:
//
//   Z'   = Z - E psi - c psi^3
//   psi' = psi + Z'
//
// One step takes site i to site i+1, so an orbit is a lattice profile.

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "dnse/lattice.hpp"

namespace dnse {

template <class Real>
struct BasicMapState {
  Real psi{};
  Real z{};
};

using MapState = BasicMapState<double>;

template <class Real>
BasicMapState<Real> map_step(const BasicMapState<Real>& s, const Real& energy,
                             const Real& c) {
  const Real z = s.z - energy * s.psi - c * s.psi * s.psi * s.psi;
  return {s.psi + z, z};
}

/// Exact inverse of map_step: psi = psi' - Z', Z = Z' + E psi + c psi^3.
template <class Real>
BasicMapState<Real> map_step_inverse(const BasicMapState<Real>& s,
                                     const Real& energy, const Real& c) {
  const Real psi = s.psi - s.z;
  return {psi, s.z + energy * psi + c * psi * psi * psi};
}

struct MapOrbit {
  std::vector<MapState> points;
  /// Orbit index of each recorded point (differs from its position only when
  /// thinning).
  std::vector<std::size_t> steps;
  bool escaped = false;
  /// Index (in the unthinned orbit) of the first point with |psi| or |Z|
  /// above the escape bound. The orbit is truncated after it.
  std::optional<std::size_t> escape_index;
};

struct OrbitOptions {
  double escape_bound = 1e8;
  /// Record every stride-th point (the seed is always recorded).
  std::size_t stride = 1;
};

/// Generates `length` orbit points starting at (and including) the seed.
/// Escape is data, not an error. Throws kInvalidArgument for length == 0 or
/// stride == 0.
MapOrbit iterate_map(const MapState& seed, double energy, double c,
                     std::size_t length, const OrbitOptions& options = {});

/// Map seed that regenerates a lattice profile from site 0:
/// (psi[0], psi[0] - psi[-1]) with psi[-1] = psi[N-1] (periodic) or 0 (open).
MapState lattice_seed(const LatticeState& state);

/// The psi column of an unescaped orbit as an open-chain state (not
/// normalized). Throws kEscapedOrbit.
LatticeState lattice_from_orbit(const MapOrbit& orbit);

}  // namespace dnse
