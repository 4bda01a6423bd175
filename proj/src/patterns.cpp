#include "dnse/patterns.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "dnse/error.hpp"

namespace dnse {

PatternSpec::PatternSpec(std::vector<int> trits, Boundary boundary)
    : trits_(std::move(trits)), boundary_(boundary) {
  if (trits_.empty()) {
    throw Error(ErrorKind::kEmptyPattern, "pattern has no sites");
  }
  bool any = false;
  for (std::size_t i = 0; i < trits_.size(); ++i) {
    if (trits_[i] < -1 || trits_[i] > 1) {
      throw Error(ErrorKind::kInvalidArgument,
                  "trit out of range at site " + std::to_string(i), i);
    }
    any = any || trits_[i] != 0;
  }
  if (!any) throw Error(ErrorKind::kAllZero, "pattern has no occupied site");
}

std::string PatternSpec::to_string() const {
  std::string out;
  out.reserve(trits_.size());
  for (int t : trits_) out.push_back(t > 0 ? '+' : (t < 0 ? '-' : '0'));
  return out;
}

PatternSpec parse_pattern(std::string_view text, Boundary boundary) {
  if (text.empty()) throw Error(ErrorKind::kEmptyPattern, "empty pattern text");
  std::vector<int> trits;
  trits.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    switch (text[i]) {
      case '+': trits.push_back(1); break;
      case '-': trits.push_back(-1); break;
      case '0': trits.push_back(0); break;
      default:
        throw Error(ErrorKind::kBadCharacter,
                    "unexpected '" + std::string(1, text[i]) +
                        "' at position " + std::to_string(i),
                    i);
    }
  }
  return PatternSpec(std::move(trits), boundary);
}

PatternCounts count_pattern(const PatternSpec& spec) {
  const std::size_t size = spec.size();
  const bool periodic = spec.boundary() == Boundary::kPeriodic;
  PatternCounts counts;
  for (std::size_t i = 0; i < size; ++i) {
    const int t = spec[i];
    if (t == 0) continue;
    ++counts.n;
    int left = 0;
    if (i > 0) {
      left = spec[i - 1];
    } else if (periodic) {
      left = spec[size - 1];
    }
    if (left == 0) ++counts.m;
    // Bond (i-1, i); for a one-site ring this is the site with itself.
    if (left != 0 && left != t) ++counts.l;
  }
  return counts;
}

double strong_coupling_energy(const PatternCounts& counts, double c) {
  if (counts.n < 1) {
    throw Error(ErrorKind::kInvalidArgument, "counts need n >= 1");
  }
  return (2.0 * counts.m + 4.0 * counts.l - c) / counts.n;
}

LatticeState build_asymptotic_state(const PatternSpec& spec) {
  const PatternCounts counts = count_pattern(spec);
  const double amp = 1.0 / std::sqrt(static_cast<double>(counts.n));
  std::vector<double> values(spec.size());
  for (std::size_t i = 0; i < spec.size(); ++i) values[i] = spec[i] * amp;
  return LatticeState(std::move(values), spec.boundary());
}

PatternSpec quantize(const LatticeState& state) {
  const double peak = state.max_abs();
  if (peak == 0.0) throw Error(ErrorKind::kZeroState, "nothing to quantize");
  const double threshold = 0.5 * peak;
  std::vector<int> trits(state.size());
  for (std::size_t i = 0; i < state.size(); ++i) {
    const double v = state[i];
    trits[i] = std::abs(v) > threshold ? (v > 0 ? 1 : -1) : 0;
  }
  return PatternSpec(std::move(trits), state.boundary());
}

std::vector<PortraitPoint> limit_points(const PatternSpec& spec) {
  const std::size_t size = spec.size();
  const std::size_t bonds =
      spec.boundary() == Boundary::kPeriodic ? size : size - 1;
  std::set<std::pair<int, int>> pairs;
  for (std::size_t i = 0; i < bonds; ++i) {
    pairs.emplace(spec[i], spec[(i + 1) % size]);
  }
  const double amp =
      1.0 / std::sqrt(static_cast<double>(count_pattern(spec).n));
  std::vector<PortraitPoint> out;
  out.reserve(pairs.size());
  for (const auto& [a, b] : pairs) {
    out.push_back({a * amp, (b - a) * amp});
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

int draw_trit(std::mt19937_64& rng) {
  constexpr std::uint64_t kLimit =
      std::numeric_limits<std::uint64_t>::max() / 3 * 3;
  std::uint64_t u = rng();
  while (u >= kLimit) u = rng();
  return static_cast<int>(u % 3) - 1;
}

}  // namespace

PatternSpec random_pattern(std::size_t n, std::uint64_t seed,
                           Boundary boundary) {
  if (n == 0) throw Error(ErrorKind::kEmptyPattern, "random pattern needs N >= 1");
  std::mt19937_64 rng(seed);
  std::vector<int> trits(n);
  for (;;) {
    bool any = false;
    for (int& t : trits) {
      t = draw_trit(rng);
      any = any || t != 0;
    }
    if (any) break;
  }
  return PatternSpec(std::move(trits), boundary);
}

PatternSpec spaced_spot_pattern(std::size_t n, std::size_t spacing,
                                std::size_t spot_width,
                                const std::vector<int>& signs,
                                Boundary boundary) {
  if (spot_width == 0 || spot_width > spacing ||
      signs.size() * spacing > n) {
    throw Error(ErrorKind::kInvalidArgument,
                "spots do not fit on the lattice");
  }
  std::vector<int> trits(n, 0);
  for (std::size_t k = 0; k < signs.size(); ++k) {
    for (std::size_t j = 0; j < spot_width; ++j) {
      trits[k * spacing + j] = signs[k];
    }
  }
  return PatternSpec(std::move(trits), boundary);
}

}  // namespace dnse
