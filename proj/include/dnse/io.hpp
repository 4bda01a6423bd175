#pragma once

// File formats shared by the library and the command-line front end. Every
// floating-point value in CSV output is printed with 17 significant digits so
// that identical runs produce byte-identical files.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "json.hpp"

#include "dnse/analysis.hpp"
#include "dnse/lattice.hpp"
#include "dnse/map.hpp"
#include "dnse/newton.hpp"
#include "dnse/patterns.hpp"

namespace dnse::io {

std::string format_double(double value);

/// Metadata carried next to a state CSV as `<stem>.json`:
/// {"N":..., "boundary":"periodic"|"open", "c":..., "E":...}
struct StateMeta {
  Boundary boundary = Boundary::kPeriodic;
  double c = 0.0;
  std::optional<double> energy;
};

struct LoadedState {
  LatticeState state;
  StateMeta meta;
};

std::filesystem::path sidecar_path(const std::filesystem::path& csv);

/// `index,psi` rows 0..N-1.
std::string state_csv(const LatticeState& state);
nlohmann::json state_sidecar_json(const LatticeState& state,
                                  const StateMeta& meta);
LatticeState parse_state_csv(std::string_view text, Boundary boundary);

/// Writes the CSV and its sidecar.
void write_state(const std::filesystem::path& csv, const LatticeState& state,
                 const StateMeta& meta);
/// Reads the CSV; the sidecar, when present, supplies boundary, c and E
/// (otherwise periodic, c = 0, no E). Throws kIo / kInvalidArgument.
LoadedState read_state(const std::filesystem::path& csv);

/// `step,psi,Z`
std::string orbit_csv(const MapOrbit& orbit);
/// `psi,dpsi`
std::string portrait_csv(const PhasePortrait& portrait);
/// `scale,occupied`
std::string box_count_csv(const BoxCountResult& result);
/// `c,E,converged,n,m,l,max_amp,structure_changed,iterations,status`
std::string sweep_csv(std::span<const SweepRecord> records);

/// {"label", "period", "distinct_points", "tol", "diagnostics": {...}}
nlohmann::json classification_json(const PortraitClass& cls);
/// {"n", "m", "l", "E_infinity"}; E_infinity is null without a coupling.
nlohmann::json counts_json(const PatternCounts& counts,
                           std::optional<double> c = std::nullopt);
/// {"iterations", "converged", "E", "E_history", "residual_history",
///  "structure_changed", "counts", "final_norm", "seed", ...}
nlohmann::json report_json(const NewtonResult& result,
                           std::optional<std::uint64_t> seed);

/// Writes to a temporary sibling and renames it into place.
void write_text_atomic(const std::filesystem::path& path,
                       std::string_view content);
std::string read_text(const std::filesystem::path& path);

}  // namespace dnse::io
