#include "dnse/io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "dnse/error.hpp"

namespace dnse::io {

namespace fs = std::filesystem;

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

fs::path sidecar_path(const fs::path& csv) {
  fs::path p = csv;
  p.replace_extension(".json");
  return p;
}

std::string state_csv(const LatticeState& state) {
  std::string out = "index,psi\n";
  for (std::size_t i = 0; i < state.size(); ++i) {
    out += std::to_string(i);
    out += ',';
    out += format_double(state[i]);
    out += '\n';
  }
  return out;
}

nlohmann::json state_sidecar_json(const LatticeState& state,
                                  const StateMeta& meta) {
  nlohmann::json j;
  j["N"] = state.size();
  j["boundary"] = std::string(to_string(meta.boundary));
  j["c"] = meta.c;
  j["E"] = meta.energy ? nlohmann::json(*meta.energy) : nlohmann::json();
  return j;
}

LatticeState parse_state_csv(std::string_view text, Boundary boundary) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line.rfind("index,psi", 0) != 0) {
    throw Error(ErrorKind::kInvalidArgument,
                "state CSV must start with the header 'index,psi'");
  }
  std::vector<double> values;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw Error(ErrorKind::kInvalidArgument,
                  "malformed state row " + std::to_string(row), row);
    }
    std::size_t index = 0;
    double value = 0.0;
    try {
      index = std::stoul(line.substr(0, comma));
      value = std::stod(line.substr(comma + 1));
    } catch (const std::exception&) {
      throw Error(ErrorKind::kInvalidArgument,
                  "unparsable state row " + std::to_string(row), row);
    }
    if (index != row) {
      throw Error(ErrorKind::kInvalidArgument,
                  "state rows must be numbered 0..N-1 in order", row);
    }
    values.push_back(value);
    ++row;
  }
  return LatticeState(std::move(values), boundary);
}

void write_state(const fs::path& csv, const LatticeState& state,
                 const StateMeta& meta) {
  write_text_atomic(csv, state_csv(state));
  write_text_atomic(sidecar_path(csv),
                    state_sidecar_json(state, meta).dump(2) + "\n");
}

LoadedState read_state(const fs::path& csv) {
  StateMeta meta;
  const fs::path side = sidecar_path(csv);
  std::optional<std::size_t> expected_n;
  if (fs::exists(side)) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(read_text(side));
      meta.boundary = parse_boundary(j.at("boundary").get<std::string>());
      meta.c = j.value("c", 0.0);
      if (j.contains("E") && !j["E"].is_null()) meta.energy = j["E"].get<double>();
      if (j.contains("N")) expected_n = j["N"].get<std::size_t>();
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::kInvalidArgument,
                  "bad sidecar " + side.string() + ": " + e.what());
    }
  }
  LatticeState state = parse_state_csv(read_text(csv), meta.boundary);
  if (expected_n && *expected_n != state.size()) {
    throw Error(ErrorKind::kInvalidArgument,
                "sidecar N does not match the CSV row count");
  }
  return {std::move(state), meta};
}

std::string orbit_csv(const MapOrbit& orbit) {
  std::string out = "step,psi,Z\n";
  for (std::size_t i = 0; i < orbit.points.size(); ++i) {
    const std::size_t step = i < orbit.steps.size() ? orbit.steps[i] : i;
    out += std::to_string(step) + ',' + format_double(orbit.points[i].psi) +
           ',' + format_double(orbit.points[i].z) + '\n';
  }
  return out;
}

std::string portrait_csv(const PhasePortrait& portrait) {
  std::string out = "psi,dpsi\n";
  for (const auto& p : portrait.points) {
    out += format_double(p.x) + ',' + format_double(p.y) + '\n';
  }
  return out;
}

std::string box_count_csv(const BoxCountResult& result) {
  std::string out = "scale,occupied\n";
  for (const auto& [scale, occupied] : result.rows) {
    out += format_double(scale) + ',' + std::to_string(occupied) + '\n';
  }
  return out;
}

std::string sweep_csv(std::span<const SweepRecord> records) {
  std::string out =
      "c,E,converged,n,m,l,max_amp,structure_changed,iterations,status\n";
  for (const auto& r : records) {
    out += format_double(r.c) + ',' + format_double(r.energy) + ',' +
           (r.converged ? "1" : "0") + ',' + std::to_string(r.counts.n) + ',' +
           std::to_string(r.counts.m) + ',' + std::to_string(r.counts.l) +
           ',' + format_double(r.max_amplitude) + ',' +
           (r.structure_changed ? "1" : "0") + ',' +
           std::to_string(r.iterations) + ',' +
           std::string(to_string(r.status)) + '\n';
  }
  return out;
}

nlohmann::json classification_json(const PortraitClass& cls) {
  nlohmann::json j;
  j["label"] = std::string(to_string(cls.label));
  j["period"] = cls.period ? nlohmann::json(*cls.period) : nlohmann::json();
  j["distinct_points"] = cls.distinct_points;
  j["tol"] = cls.tol;
  j["diagnostics"] = {{"diameter", cls.diameter},
                      {"skeleton_points", cls.skeleton_points},
                      {"curve_fraction", cls.curve_fraction},
                      {"median_anisotropy", cls.median_anisotropy},
                      {"note", cls.note}};
  return j;
}

nlohmann::json counts_json(const PatternCounts& counts,
                           std::optional<double> c) {
  nlohmann::json j;
  j["n"] = counts.n;
  j["m"] = counts.m;
  j["l"] = counts.l;
  if (c) {
    j["c"] = *c;
    j["E_infinity"] = strong_coupling_energy(counts, *c);
  } else {
    j["E_infinity"] = nullptr;
  }
  return j;
}

nlohmann::json report_json(const NewtonResult& result,
                           std::optional<std::uint64_t> seed) {
  const NewtonReport& r = result.report;
  nlohmann::json j;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["status"] = std::string(to_string(r.status));
  j["failed"] = !r.converged;
  j["E"] = result.energy;
  j["E_history"] = r.energy_history;
  j["residual_history"] = r.residual_history;
  j["final_residual"] = r.final_residual;
  j["effective_tolerance"] = r.effective_tolerance;
  j["structure_changed"] = r.structure_changed;
  j["structure_change_iteration"] =
      r.structure_change_iteration ? nlohmann::json(*r.structure_change_iteration)
                                   : nlohmann::json();
  j["initial_counts"] = {{"n", r.initial_counts.n},
                         {"m", r.initial_counts.m},
                         {"l", r.initial_counts.l}};
  j["counts"] = {{"n", r.final_counts.n},
                 {"m", r.final_counts.m},
                 {"l", r.final_counts.l}};
  j["final_norm"] = r.final_norm;
  j["seed"] = seed ? nlohmann::json(*seed) : nlohmann::json();
  if (!r.message.empty()) j["message"] = r.message;
  return j;
}

void write_text_atomic(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw Error(ErrorKind::kIo, "cannot open " + tmp.string() + ": " +
                                      std::strerror(errno));
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(ErrorKind::kIo, "write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace dnse::io
