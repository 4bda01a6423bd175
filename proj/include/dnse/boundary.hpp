#pragma once

#include <string>
#include <string_view>

namespace dnse {

/// Periodic rings wrap indices modulo N. Open chains are embedded in a
/// zero-padded infinite lattice: psi[-1] = psi[N] = 0.
enum class Boundary { kPeriodic, kOpen };

std::string_view to_string(Boundary boundary);

/// Accepts "periodic"/"pbc" and "open". Throws Error(kInvalidArgument).
Boundary parse_boundary(std::string_view text);

}  // namespace dnse
