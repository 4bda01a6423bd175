#include "cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dnse/analysis.hpp"
#include "dnse/error.hpp"
#include "dnse/io.hpp"
#include "dnse/lattice.hpp"
#include "dnse/map.hpp"
#include "dnse/newton.hpp"
#include "dnse/patterns.hpp"
#include "dnse/precise.hpp"

namespace dnse::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kOutDirEnv = "DNSE_OUT_DIR";

// Reads a JSON object as a config file: top-level keys are global options,
// nested objects are subcommand sections. Values given on the command line
// win over the file.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App* app, bool default_also, bool,
                        std::string) const override {
    return resolved(*app, default_also).dump(2);
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& in) const override {
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw CLI::ConversionError("config", std::string("invalid JSON: ") +
                                               e.what());
    }
    if (!j.is_object()) {
      throw CLI::ConversionError("config", "config must be a JSON object");
    }
    std::vector<CLI::ConfigItem> items;
    walk(j, {}, items);
    return items;
  }

  // Every option of `app` that has a long name or is positional, with its
  // given or default value, plus a section per parsed subcommand.
  static json resolved(const CLI::App& app, bool default_also) {
    json j = json::object();
    for (const CLI::Option* opt : app.get_options()) {
      if (!opt->get_configurable()) continue;
      std::string name;
      if (!opt->get_lnames().empty()) {
        name = opt->get_lnames().front();
      } else if (opt->get_positional()) {
        name = opt->get_name();
      } else {
        continue;
      }
      if (name == "help" || name == "config") continue;
      if (opt->get_type_size() == 0) {
        if (opt->count() > 0) {
          j[name] = true;
        } else if (default_also) {
          j[name] = false;
        }
        continue;
      }
      const auto& results = opt->results();
      if (!results.empty()) {
        if (opt->get_expected_max() > 1) {
          j[name] = results;
        } else {
          j[name] = results.back();
        }
      } else if (default_also && !opt->get_default_str().empty()) {
        j[name] = opt->get_default_str();
      }
    }
    for (const CLI::App* sub : app.get_subcommands()) {
      j[sub->get_name()] = resolved(*sub, default_also);
    }
    return j;
  }

 private:
  static std::string scalar(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    return v.dump();
  }

  static void walk(const json& j, const std::vector<std::string>& parents,
                   std::vector<CLI::ConfigItem>& items) {
    for (const auto& [key, value] : j.items()) {
      if (value.is_object()) {
        auto next = parents;
        next.push_back(key);
        walk(value, next, items);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      if (value.is_array()) {
        for (const auto& v : value) item.inputs.push_back(scalar(v));
      } else {
        item.inputs = {scalar(value)};
      }
      items.push_back(std::move(item));
    }
  }
};

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kNoConvergence:
      return kNoConvergence;
    case ErrorKind::kSingularJacobian:
      return kSingularJacobian;
    default:
      return kInputError;
  }
}

int exit_code_for(NewtonStatus status) {
  switch (status) {
    case NewtonStatus::kConverged:
      return kOk;
    case NewtonStatus::kSingularJacobian:
      return kSingularJacobian;
    case NewtonStatus::kNoConvergence:
      break;
  }
  return kNoConvergence;
}

std::string default_out_dir() {
  if (const char* env = std::getenv(kOutDirEnv); env != nullptr && *env) {
    return env;
  }
  return "dnse_out";
}

struct Globals {
  std::string out_dir;
};

// Where the initial lattice comes from (solve and sweep).
struct SourceOptions {
  std::string pattern;
  std::string state_file;
  std::size_t random_n = 0;
  std::uint64_t seed = 1;
  std::size_t pad_to = 0;
  std::string bc = "periodic";

  CLI::Option* pattern_opt = nullptr;
  CLI::Option* state_opt = nullptr;
  CLI::Option* random_opt = nullptr;
  CLI::Option* bc_opt = nullptr;

  void add_to(CLI::App& cmd) {
    pattern_opt = cmd.add_option("--pattern", pattern,
                                 "Strong-coupling pattern over {+,0,-}");
    state_opt = cmd.add_option("--state-file", state_file,
                               "Initial state CSV (sidecar JSON optional)");
    random_opt = cmd.add_option("--random", random_n,
                                "Random pattern of N sites")
                     ->default_str("");
    pattern_opt->excludes(state_opt)->excludes(random_opt);
    state_opt->excludes(random_opt);
    cmd.add_option("--seed", seed, "Seed for --random");
    cmd.add_option("--pad-to", pad_to,
                   "Append empty sites to a --pattern up to this length");
    // Not echoed when absent, so a replayed state file keeps its sidecar's
    // boundary.
    bc_opt = cmd.add_option("--bc", bc,
                            "Boundary: periodic or open (default periodic, "
                            "or the state file's)")
                 ->default_str("");
  }
};

struct InitialState {
  LatticeState state;
  Boundary boundary;
  std::optional<std::uint64_t> seed;
  std::optional<double> sidecar_c;
  std::string description;
};

PatternSpec padded(const PatternSpec& spec, std::size_t pad_to) {
  if (pad_to <= spec.size()) return spec;
  std::vector<int> trits = spec.trits();
  trits.resize(pad_to, 0);
  return PatternSpec(std::move(trits), spec.boundary());
}

InitialState build_initial(const SourceOptions& src) {
  const std::size_t given = src.pattern_opt->count() + src.state_opt->count() +
                            src.random_opt->count();
  if (given != 1) {
    throw Error(ErrorKind::kInvalidArgument,
                "exactly one of --pattern, --state-file, --random is required");
  }
  const Boundary bc = parse_boundary(src.bc);
  if (src.pattern_opt->count() > 0) {
    const PatternSpec spec = padded(parse_pattern(src.pattern, bc), src.pad_to);
    return {build_asymptotic_state(spec), bc, std::nullopt, std::nullopt,
            "pattern " + spec.to_string()};
  }
  if (src.random_opt->count() > 0) {
    if (src.random_n == 0) {
      throw Error(ErrorKind::kInvalidArgument, "--random needs N >= 1");
    }
    const PatternSpec spec = random_pattern(src.random_n, src.seed, bc);
    return {build_asymptotic_state(spec), bc, src.seed, std::nullopt,
            "random pattern " + spec.to_string()};
  }
  io::LoadedState loaded = io::read_state(src.state_file);
  Boundary boundary = loaded.meta.boundary;
  if (src.bc_opt->count() > 0) boundary = bc;
  std::vector<double> values(loaded.state.values().begin(),
                             loaded.state.values().end());
  return {LatticeState(std::move(values), boundary), boundary, std::nullopt,
          loaded.meta.c, "state file " + src.state_file};
}

struct NewtonOptions {
  double tol = 1e-12;
  int max_iter = 200;
  double structure_threshold = 1.0;
  std::string estimator = "sum-ratio";
  std::string update = "estimate";
  bool no_renormalize = false;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--tol", tol, "Residual tolerance (max norm)");
    cmd.add_option("--max-iter", max_iter, "Newton iteration cap");
    cmd.add_option("--structure-threshold", structure_threshold,
                   "|dE| per iteration that flags a structure change");
    cmd.add_option("--estimator", estimator, "Energy estimator")
        ->check(CLI::IsMember({"sum-ratio", "rayleigh"}));
    cmd.add_option("--update", update,
                   "estimate: estimate E then step psi; bordered: joint step")
        ->check(CLI::IsMember({"estimate", "bordered"}));
    cmd.add_flag("--no-renormalize", no_renormalize,
                 "Skip renormalization after each step")
        ->default_str("false");
  }

  NewtonConfig config() const {
    NewtonConfig cfg;
    cfg.tol_residual = tol;
    cfg.max_iter = max_iter;
    cfg.structure_change_threshold = structure_threshold;
    cfg.renormalize = !no_renormalize;
    cfg.estimator = estimator == "rayleigh" ? EnergyEstimator::kRayleigh
                                            : EnergyEstimator::kSumRatio;
    cfg.update = update == "bordered" ? EnergyUpdate::kBordered
                                      : EnergyUpdate::kEstimateThenStep;
    return cfg;
  }
};

void write_json(const fs::path& path, const json& j) {
  io::write_text_atomic(path, j.dump(2) + "\n");
}

// Portrait CSV and classification JSON for a lattice, when it has at least
// two sites.
std::optional<PortraitClass> write_lattice_analysis(const fs::path& dir,
                                                    const std::string& prefix,
                                                    const LatticeState& state) {
  if (state.size() < 2) return std::nullopt;
  const PhasePortrait portrait = phase_portrait(state);
  io::write_text_atomic(dir / (prefix + "_portrait.csv"),
                        io::portrait_csv(portrait));
  const PortraitClass cls = classify_portrait(portrait);
  write_json(dir / (prefix + "_class.json"), io::classification_json(cls));
  return cls;
}

// ---------------------------------------------------------------- pattern

struct PatternCommand {
  std::string text;
  std::string bc = "periodic";
  std::vector<double> c_values;

  void add_to(CLI::App& cmd) {
    cmd.add_option("text", text, "Pattern over {+,0,-}")->required();
    cmd.add_option("--bc", bc, "Boundary: periodic or open");
    cmd.add_option("--c", c_values, "Coupling for the E table (repeatable)");
  }

  int run(const Globals& g, std::ostream& out) const {
    const PatternSpec spec = parse_pattern(text, parse_boundary(bc));
    const PatternCounts counts = count_pattern(spec);
    json rows = json::array();
    if (c_values.empty()) {
      rows.push_back(io::counts_json(counts));
    } else {
      for (double c : c_values) rows.push_back(io::counts_json(counts, c));
    }
    for (const json& row : rows) out << row.dump() << "\n";
    write_json(fs::path(g.out_dir) / "pattern.json",
               json{{"pattern", spec.to_string()},
                    {"boundary", to_string(spec.boundary())},
                    {"rows", rows}});
    return kOk;
  }
};

// ------------------------------------------------------------------ solve

struct SolveCommand {
  SourceOptions source;
  NewtonOptions newton;
  std::optional<double> c;
  std::string prefix = "solve";

  void add_to(CLI::App& cmd) {
    source.add_to(cmd);
    newton.add_to(cmd);
    cmd.add_option("--c", c,
                   "Coupling (defaults to the state file's sidecar value)");
    cmd.add_option("--out-prefix", prefix, "File name prefix");
  }

  int run(const Globals& g, std::ostream& out) const {
    const InitialState init = build_initial(source);
    const std::optional<double> coupling = c ? c : init.sidecar_c;
    if (!coupling) throw Error(ErrorKind::kInvalidArgument, "--c is required");
    const ModelParams params{*coupling, init.boundary};
    const NewtonResult result =
        newton_solve(init.state, params, newton.config());

    const fs::path dir(g.out_dir);
    io::write_state(dir / (prefix + "_state.csv"), result.state,
                    {init.boundary, *coupling, result.energy});
    json report = io::report_json(result, init.seed);
    report["source"] = init.description;
    report["c"] = *coupling;
    report["boundary"] = to_string(init.boundary);
    const auto cls = write_lattice_analysis(dir, prefix, result.state);
    if (cls) report["label"] = to_string(cls->label);
    write_json(dir / (prefix + "_report.json"), report);

    out << "status " << to_string(result.report.status) << "  E "
        << io::format_double(result.energy) << "  iterations "
        << result.report.iterations << "  residual "
        << io::format_double(result.report.final_residual);
    if (cls) {
      out << "  class " << to_string(cls->label);
      if (cls->period) out << " (period " << *cls->period << ")";
    }
    if (result.report.structure_changed) out << "  structure_changed";
    out << "\n";
    return exit_code_for(result.report.status);
  }
};

// ------------------------------------------------------------------ sweep

struct SweepCommand {
  SourceOptions source;
  NewtonOptions newton;
  double c_from = 0.0;
  double c_to = 0.0;
  double c_step = 1.0;
  std::string prefix = "sweep";

  void add_to(CLI::App& cmd) {
    source.add_to(cmd);
    newton.add_to(cmd);
    cmd.add_option("--c-from", c_from, "First coupling")->required();
    cmd.add_option("--c-to", c_to, "Last coupling (inclusive)")->required();
    cmd.add_option("--c-step", c_step, "Signed coupling step");
    cmd.add_option("--out-prefix", prefix, "File name prefix");
  }

  std::vector<double> c_values() const {
    if (!std::isfinite(c_from) || !std::isfinite(c_to) ||
        !std::isfinite(c_step) || c_step == 0.0) {
      throw Error(ErrorKind::kInvalidArgument,
                  "--c-from/--c-to/--c-step must be finite, step nonzero");
    }
    // c_k = c_from + k step while not past c_to; a small slack keeps the end
    // point despite rounding.
    std::vector<double> cs;
    const double slack = 1e-9 * std::abs(c_step);
    for (std::size_t k = 0;; ++k) {
      const double c = c_from + static_cast<double>(k) * c_step;
      if (c_step > 0 ? c > c_to + slack : c < c_to - slack) break;
      cs.push_back(c);
    }
    return cs;
  }

  int run(const Globals& g, std::ostream& out) const {
    const InitialState init = build_initial(source);
    const std::vector<double> cs = c_values();
    const auto records = sweep_c(init.state, init.boundary, cs, newton.config());
    io::write_text_atomic(fs::path(g.out_dir) / (prefix + ".csv"),
                          io::sweep_csv(records));
    std::size_t converged = 0;
    for (const SweepRecord& r : records) converged += r.converged ? 1 : 0;
    out << records.size() << " couplings, " << converged << " converged\n";
    return kOk;
  }
};

// -------------------------------------------------------------------- map

struct MapCommand {
  std::optional<double> energy;
  std::optional<double> c;
  double psi0 = 0.0;
  double z0 = 0.0;
  std::optional<std::size_t> steps;
  double escape = 1e8;
  std::size_t stride = 1;
  std::string compare_state;
  std::string prefix = "map";

  CLI::Option* compare_opt = nullptr;
  CLI::Option* psi0_opt = nullptr;
  CLI::Option* z0_opt = nullptr;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--E", energy, "Eigenvalue");
    cmd.add_option("--c", c, "Coupling");
    // No echoed defaults: with --compare-state an absent seed means "take it
    // from the state".
    psi0_opt = cmd.add_option("--psi0", psi0, "Initial psi (default 0)")
                   ->default_str("");
    z0_opt = cmd.add_option("--z0", z0, "Initial Z = psi[0] - psi[-1]")
                 ->default_str("");
    cmd.add_option("--steps", steps,
                   "Orbit length including the seed (default 1000, or N)");
    cmd.add_option("--escape", escape, "Escape bound on |psi| and |Z|");
    cmd.add_option("--stride", stride, "Record every stride-th point");
    compare_opt = cmd.add_option(
        "--compare-state", compare_state,
        "Seed from a state file and compare the orbit with its lattice");
    cmd.add_option("--out-prefix", prefix, "File name prefix");
  }

  int run(const Globals& g, std::ostream& out) const {
    std::optional<io::LoadedState> loaded;
    std::optional<double> e = energy;
    std::optional<double> coupling = c;
    MapState seed{psi0, z0};
    std::size_t length = steps.value_or(1000);
    if (compare_opt->count() > 0) {
      loaded = io::read_state(compare_state);
      if (!e) e = loaded->meta.energy;
      if (!coupling) coupling = loaded->meta.c;
      const MapState lattice = lattice_seed(loaded->state);
      if (psi0_opt->count() == 0) seed.psi = lattice.psi;
      if (z0_opt->count() == 0) seed.z = lattice.z;
      if (!steps) length = loaded->state.size();
    }
    if (!e || !coupling) {
      throw Error(ErrorKind::kInvalidArgument, "--E and --c are required");
    }

    const MapOrbit orbit =
        iterate_map(seed, *e, *coupling, length, {escape, stride});
    const fs::path dir(g.out_dir);
    io::write_text_atomic(dir / (prefix + "_orbit.csv"), io::orbit_csv(orbit));
    const PhasePortrait portrait = phase_portrait(orbit);
    io::write_text_atomic(dir / (prefix + "_portrait.csv"),
                          io::portrait_csv(portrait));
    json summary = {{"points", orbit.points.size()},
                    {"escaped", orbit.escaped},
                    {"escape_index", orbit.escape_index
                                         ? json(*orbit.escape_index)
                                         : json()}};
    if (!portrait.points.empty()) {
      const PortraitClass cls = classify_portrait(portrait);
      write_json(dir / (prefix + "_class.json"), io::classification_json(cls));
      summary["label"] = to_string(cls.label);
    }

    out << orbit.points.size() << " points";
    if (orbit.escaped) out << ", escaped at step " << *orbit.escape_index;
    out << "\n";

    if (loaded) {
      const ModelParams params{*coupling, loaded->state.boundary()};
      const precise::MapReplay replay =
          precise::replay_lattice_with_map(loaded->state, params, *e);
      summary["compare"] = {
          {"max_deviation_double",
           replay.double_precision_escaped
               ? json()
               : json(replay.double_precision_deviation)},
          {"double_escaped", replay.double_precision_escaped},
          {"max_deviation_extended", replay.max_deviation},
          {"closure_error_extended", replay.closure_error},
          {"extended_digits", replay.digits}};
      out << "max |orbit - lattice|: double "
          << (replay.double_precision_escaped
                  ? std::string("escaped")
                  : io::format_double(replay.double_precision_deviation))
          << ", extended " << io::format_double(replay.max_deviation)
          << " (" << replay.digits << " digits); closure "
          << io::format_double(replay.closure_error) << "\n";
    }
    write_json(dir / (prefix + "_summary.json"), summary);
    return kOk;
  }
};

// --------------------------------------------------------------- portrait

struct PortraitCommand {
  std::string state_file;
  double tol = 1e-6;
  std::vector<double> scales;
  std::vector<double> zoom;
  std::size_t zoom_levels = 2;
  double shrink = 0.5;
  std::string prefix = "portrait";

  void add_to(CLI::App& cmd) {
    cmd.add_option("--state-file", state_file, "State CSV")->required();
    cmd.add_option("--tol", tol, "Distinct-point tolerance");
    cmd.add_option("--scales", scales,
                   "Box sizes (default: diameter / 2^k, k = 1..8)");
    cmd.add_option("--zoom", zoom, "Zoom region x_min x_max y_min y_max")
        ->expected(4);
    cmd.add_option("--zoom-levels", zoom_levels, "Nested zoom levels");
    cmd.add_option("--shrink", shrink, "Zoom shrink factor per level");
    cmd.add_option("--out-prefix", prefix, "File name prefix");
  }

  int run(const Globals& g, std::ostream& out) const {
    const io::LoadedState loaded = io::read_state(state_file);
    const PhasePortrait portrait = phase_portrait(loaded.state);
    const fs::path dir(g.out_dir);
    io::write_text_atomic(dir / (prefix + ".csv"), io::portrait_csv(portrait));

    ClassifyConfig cfg;
    cfg.distinct_tol = tol;
    const PortraitClass cls = classify_portrait(portrait, cfg);
    write_json(dir / (prefix + "_class.json"), io::classification_json(cls));
    out << "class " << to_string(cls.label) << "  distinct "
        << cls.distinct_points;
    if (cls.period) out << "  period " << *cls.period;
    out << "\n";

    const Rect box = bounding_box(portrait);
    std::vector<double> sizes = scales;
    if (sizes.empty()) {
      const double d = std::max(box.x_max - box.x_min, box.y_max - box.y_min);
      if (d > 0.0) {
        for (int k = 1; k <= 8; ++k) sizes.push_back(std::ldexp(d, -k));
      }
    }
    if (sizes.size() >= 2) {
      const BoxCountResult boxes = box_count(portrait, sizes);
      io::write_text_atomic(dir / (prefix + "_boxes.csv"),
                            io::box_count_csv(boxes));
      out << "box-count slope " << io::format_double(boxes.slope) << "\n";
    }

    if (!zoom.empty()) {
      const Rect region{zoom[0], zoom[1], zoom[2], zoom[3]};
      const ZoomReport report =
          zoom_report(portrait, region, zoom_levels, shrink);
      json levels = json::array();
      for (const ZoomLevel& level : report.levels) {
        json pts = json::array();
        for (const PortraitPoint& p : level.points) pts.push_back({p.x, p.y});
        levels.push_back({{"region",
                           {level.region.x_min, level.region.x_max,
                            level.region.y_min, level.region.y_max}},
                          {"count", level.points.size()},
                          {"points", pts}});
      }
      write_json(dir / (prefix + "_zoom.json"),
                 {{"levels", levels},
                  {"empty_level", report.empty_level
                                      ? json(*report.empty_level)
                                      : json()}});
      for (std::size_t k = 0; k < report.levels.size(); ++k) {
        out << "zoom level " << k << ": " << report.levels[k].points.size()
            << " points\n";
      }
    }
    return kOk;
  }
};

// ----------------------------------------------------------------- random

struct RandomCommand {
  std::size_t n = 0;
  std::uint64_t seed = 1;
  std::string bc = "periodic";

  void add_to(CLI::App& cmd) {
    cmd.add_option("n", n, "Number of sites")->required();
    cmd.add_option("--seed", seed, "Generator seed");
    cmd.add_option("--bc", bc, "Boundary: periodic or open");
  }

  int run(const Globals& g, std::ostream& out) const {
    if (n == 0) throw Error(ErrorKind::kInvalidArgument, "N must be >= 1");
    const PatternSpec spec = random_pattern(n, seed, parse_boundary(bc));
    out << spec.to_string() << "\n";
    io::write_text_atomic(fs::path(g.out_dir) / "random.txt",
                          spec.to_string() + "\n");
    return kOk;
  }
};

// With no subcommand on the command line, a config file holding exactly one
// subcommand section selects it, so `--config run.json` replays a run.
void select_command_from_config(std::vector<std::string>& args,
                                const CLI::App& app) {
  std::optional<std::string> config_path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (app.get_subcommand_no_throw(args[i]) != nullptr) return;
    if (args[i] == "--config" && i + 1 < args.size()) {
      config_path = args[i + 1];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
    }
  }
  if (!config_path) return;
  std::ifstream in(*config_path);
  const json j = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (!j.is_object()) return;
  std::optional<std::string> found;
  for (const auto& [key, value] : j.items()) {
    if (!value.is_object() || app.get_subcommand_no_throw(key) == nullptr) {
      continue;
    }
    if (found) return;
    found = key;
  }
  if (found) args.push_back(*found);
}

}  // namespace

int run(const std::vector<std::string>& args_in, std::ostream& out,
        std::ostream& err) {
  CLI::App app("Stationary states of the discrete nonlinear Schroedinger "
               "equation",
               "dnse");
  app.fallthrough();
  app.option_defaults()->always_capture_default();
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON config file; flags override it");
  app.require_subcommand(1);

  Globals globals{default_out_dir()};
  app.add_option("--out-dir", globals.out_dir,
                 std::string("Output directory (default from ") + kOutDirEnv +
                     ")");

  PatternCommand pattern;
  SolveCommand solve;
  SweepCommand sweep;
  MapCommand map;
  PortraitCommand portrait;
  RandomCommand random;

  struct Entry {
    CLI::App* app;
    std::function<int()> run;
  };
  std::vector<Entry> commands;
  auto add = [&](const char* name, const char* help, auto& command) {
    CLI::App* sub = app.add_subcommand(name, help);
    command.add_to(*sub);
    commands.push_back({sub, [&command, &globals, &out] {
                          return command.run(globals, out);
                        }});
  };
  add("pattern", "Count spots and kinks; strong-coupling eigenvalues",
      pattern);
  add("solve", "Continue a pattern or state to finite coupling", solve);
  add("sweep", "Solve over a range of couplings with warm starts", sweep);
  add("map", "Iterate the two-dimensional map", map);
  add("portrait", "Re-analyze a state file's phase portrait", portrait);
  add("random", "Emit a random pattern string", random);

  std::vector<std::string> args = args_in;
  if (args.empty()) args.emplace_back("dnse");
  select_command_from_config(args, app);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    fs::create_directories(globals.out_dir);
    json resolved = JsonConfig::resolved(app, true);
    write_json(fs::path(globals.out_dir) / "run.json", resolved);
    for (const Entry& entry : commands) {
      if (entry.app->parsed()) return entry.run();
    }
    return kInputError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
}

}  // namespace dnse::cli
