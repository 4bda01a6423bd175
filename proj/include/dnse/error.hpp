#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dnse {

enum class ErrorKind {
  kInvalidArgument,
  kZeroState,
  kOddPeriodicLattice,
  kBadCharacter,
  kEmptyPattern,
  kAllZero,
  kSumTooSmall,
  kLatticeTooSmall,
  kSingularJacobian,
  kNoConvergence,
  kEscapedOrbit,
  kNotLocalized,
  kWindowTouchesPeak,
  kZeroAmplitudeInWindow,
  kEmptyRegion,
  kIo,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library. `kind()` is the machine-readable class;
/// `position()` is set for errors tied to an index (pattern character, lattice
/// site, pivot row).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        std::optional<std::size_t> position = std::nullopt)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind),
        position_(position) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::optional<std::size_t> position() const noexcept { return position_; }

 private:
  ErrorKind kind_;
  std::optional<std::size_t> position_;
};

}  // namespace dnse
