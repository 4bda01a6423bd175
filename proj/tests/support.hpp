#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"

#include "dnse/error.hpp"
#include "dnse/lattice.hpp"

namespace support {

template <class F>
dnse::ErrorKind error_kind_of(F&& f) {
  try {
    f();
  } catch (const dnse::Error& e) {
    return e.kind();
  }
  FAIL("expected dnse::Error");
  return dnse::ErrorKind::kInvalidArgument;
}

inline std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng,
                                         double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

inline dnse::LatticeState random_state(std::size_t n, dnse::Boundary bc,
                                       std::mt19937_64& rng) {
  return dnse::LatticeState(random_vector(n, rng), bc);
}

inline std::vector<double> to_vector(const dnse::LatticeState& s) {
  return {s.values().begin(), s.values().end()};
}

}  // namespace support
