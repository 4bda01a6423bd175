#include <cmath>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "oracles.hpp"

#include "cli.hpp"
#include "dnse/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "dnse_cli_tests" / name;
  fs::remove_all(dir);
  return dir;
}

Run run(const fs::path& dir, std::vector<std::string> args) {
  args.insert(args.begin(), {"dnse", "--out-dir", dir.string()});
  std::ostringstream out, err;
  const int code = dnse::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

json load(const fs::path& p) { return json::parse(dnse::io::read_text(p)); }

std::string alternating() { return oracle::spaced_spots(100, 10, 1, "+-+-+-+-+-"); }

}  // namespace

TEST_CASE("pattern command") {
  const fs::path d = fresh_dir("pattern");
  Run r = run(d, {"pattern", "+0-", "--bc", "periodic", "--c", "40"});
  CHECK(r.code == 0);
  const json row = json::parse(r.out);
  CHECK(row["n"] == 2);
  CHECK(row["m"] == 1);
  CHECK(row["l"] == 1);
  CHECK(row["E_infinity"] == -17.0);
  CHECK(fs::exists(d / "run.json"));
  CHECK(load(d / "run.json")["pattern"]["text"] == "+0-");

  r = run(d, {"pattern", "++0", "--c", "100"});
  CHECK(json::parse(r.out)["E_infinity"] == -49.0);

  r = run(d, {"pattern", "+++", "--c", "10", "--c", "30"});
  std::istringstream lines(r.out);
  std::string first, second;
  std::getline(lines, first);
  std::getline(lines, second);
  CHECK(json::parse(first)["E_infinity"].get<double>() == doctest::Approx(-10.0 / 3));
  CHECK(json::parse(second)["E_infinity"] == -10.0);

  CHECK(run(d, {"pattern", ""}).code == 2);
  r = run(d, {"pattern", "+x0"});
  CHECK(r.code == 2);
  CHECK(r.err.find("position 1") != std::string::npos);
  CHECK(run(d, {"pattern", "+0", "--bc", "mobius"}).code == 2);
  CHECK(run(d, {"frobnicate"}).code == 2);
  CHECK(run(d, {}).code == 2);
}

TEST_CASE("solve command writes the full artifact set") {
  const fs::path d = fresh_dir("solve");
  const Run r = run(d, {"solve", "--pattern", alternating(), "--c", "24"});
  CHECK(r.code == 0);
  for (const char* f : {"solve_state.csv", "solve_state.json", "solve_report.json",
                        "solve_portrait.csv", "solve_class.json", "run.json"}) {
    CHECK(fs::exists(d / f));
  }
  const json rep = load(d / "solve_report.json");
  CHECK(rep["converged"] == true);
  CHECK(std::abs(rep["E"].get<double>() + 0.4) < 0.05);
  CHECK(rep["seed"].is_null());
  const json cls = load(d / "solve_class.json");
  CHECK(cls["label"] == "regular_periodic");
  CHECK(cls["period"] == 20);
  CHECK(load(d / "solve_state.json")["c"] == 24.0);
}

TEST_CASE("solve from a random pattern records the seed") {
  const fs::path d = fresh_dir("random_solve");
  const Run r = run(d, {"solve", "--random", "60", "--seed", "5", "--c", "240"});
  CHECK(r.code == 0);
  CHECK(load(d / "solve_report.json")["seed"] == 5);
}

TEST_CASE("single-site pattern at very strong coupling") {
  const fs::path d = fresh_dir("single");
  // On an open chain, or padded with empty sites, the one-site polaron has
  // E = 2 - c.
  for (const std::vector<std::string> extra :
       {std::vector<std::string>{"--bc", "open"},
        std::vector<std::string>{"--pad-to", "9"}}) {
    std::vector<std::string> args{"solve", "--pattern", "+", "--c", "1e6"};
    args.insert(args.end(), extra.begin(), extra.end());
    CHECK(run(d, args).code == 0);
    const double e = load(d / "solve_report.json")["E"].get<double>();
    CHECK(std::abs(e - (2.0 - 1e6)) <= 1e-3);
  }
}

TEST_CASE("solve failures map to exit codes and still write artifacts") {
  const fs::path d = fresh_dir("fail");
  Run r = run(d, {"solve", "--pattern", alternating(), "--c", "24", "--max-iter", "2"});
  CHECK(r.code == 3);
  CHECK(load(d / "solve_report.json")["failed"] == true);
  CHECK(fs::exists(d / "solve_state.csv"));

  // c = 0 with a lumpy ring: the Jacobian is the singular periodic Laplacian.
  const fs::path state = d / "lumpy.csv";
  dnse::io::write_text_atomic(state, "index,psi\n0,0.5\n1,0.6\n2,0.4\n3,0.5\n");
  r = run(d, {"solve", "--state-file", state.string(), "--c", "0"});
  CHECK(r.code == 4);
  CHECK(load(d / "solve_report.json")["status"] == "singular_jacobian");

  CHECK(run(d, {"solve", "--c", "3"}).code == 2);  // no source
  CHECK(run(d, {"solve", "--pattern", "+0", "--random", "4", "--c", "3"}).code == 2);
  CHECK(run(d, {"solve", "--pattern", "+0"}).code == 2);  // no coupling
  CHECK(run(d, {"solve", "--state-file", (d / "nope.csv").string(), "--c", "1"})
            .code == 2);
}

TEST_CASE("identical configs give byte-identical outputs") {
  const fs::path a = fresh_dir("det_a");
  const fs::path b = fresh_dir("det_b");
  const std::vector<std::string> args{"solve", "--random", "120", "--seed", "11",
                                      "--c", "480"};
  run(a, args);
  run(b, args);
  for (const char* f : {"solve_state.csv", "solve_portrait.csv"}) {
    CHECK(dnse::io::read_text(a / f) == dnse::io::read_text(b / f));
  }
}

TEST_CASE("run.json replays the run and flags override the config") {
  const fs::path a = fresh_dir("replay_a");
  const fs::path b = fresh_dir("replay_b");
  REQUIRE(run(a, {"solve", "--pattern", "+0-00+0", "--c", "30", "--out-prefix",
                  "x"})
              .code == 0);
  const fs::path cfg = a / "run.json";
  const json resolved = load(cfg);
  CHECK(resolved["solve"]["c"] == "30");
  CHECK(resolved["solve"]["tol"] == "1e-12");

  std::ostringstream out, err;
  CHECK(dnse::cli::run({"dnse", "--config", cfg.string(), "--out-dir", b.string()},
                       out, err) == 0);
  CHECK(dnse::io::read_text(a / "x_state.csv") ==
        dnse::io::read_text(b / "x_state.csv"));

  const fs::path c = fresh_dir("replay_c");
  std::ostringstream out2, err2;
  CHECK(dnse::cli::run({"dnse", "--config", cfg.string(), "--out-dir",
                        c.string(), "solve", "--c", "31"},
                       out2, err2) == 0);
  CHECK(load(c / "x_state.json")["c"] == 31.0);
  CHECK(load(c / "run.json")["solve"]["pattern"] == "+0-00+0");
}

TEST_CASE("sweep command") {
  const fs::path d = fresh_dir("sweep");
  CHECK(run(d, {"sweep", "--pattern", alternating(), "--c-from", "24", "--c-to", "30"})
            .code == 0);
  const std::string csv = dnse::io::read_text(d / "sweep.csv");
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "c,E,converged,n,m,l,max_amp,structure_changed,iterations,status");
  double prev = 0;
  int rows = 0;
  while (std::getline(in, line)) {
    std::vector<std::string> cols;
    std::stringstream ls(line);
    for (std::string col; std::getline(ls, col, ',');) cols.push_back(col);
    REQUIRE(cols.size() == 10);
    const double amp = std::stod(cols[6]);
    CHECK(amp > prev);
    prev = amp;
    ++rows;
  }
  CHECK(rows == 7);

  CHECK(run(d, {"sweep", "--pattern", alternating(), "--c-from", "24", "--c-to", "20"})
            .code == 0);
  CHECK(dnse::io::read_text(d / "sweep.csv") ==
        "c,E,converged,n,m,l,max_amp,structure_changed,iterations,status\n");
  CHECK(run(d, {"sweep", "--pattern", "+0", "--c-from", "1", "--c-to", "2",
                "--c-step", "0"})
            .code == 2);
}

TEST_CASE("map command") {
  const fs::path d = fresh_dir("map");
  Run r = run(d, {"map", "--E", "-1", "--c", "3", "--psi0", "0", "--z0", "0",
                  "--steps", "10"});
  CHECK(r.code == 0);
  CHECK(dnse::io::read_text(d / "map_orbit.csv").find("9,0,0\n") != std::string::npos);
  CHECK(fs::exists(d / "map_portrait.csv"));
  CHECK(fs::exists(d / "map_class.json"));

  r = run(d, {"map", "--E", "-1", "--c", "5", "--psi0", "10", "--z0", "0"});
  CHECK(r.code == 0);
  CHECK(r.out.find("escaped") != std::string::npos);
  CHECK(load(d / "map_summary.json")["escaped"] == true);

  CHECK(run(d, {"map", "--psi0", "1"}).code == 2);

  // Seeded from a solve: the extended-precision replay reproduces the lattice.
  const fs::path s = fresh_dir("map_solve");
  REQUIRE(run(s, {"solve", "--pattern", alternating(), "--c", "24"}).code == 0);
  r = run(d, {"map", "--compare-state", (s / "solve_state.csv").string()});
  CHECK(r.code == 0);
  const json cmp = load(d / "map_summary.json")["compare"];
  CHECK(cmp["max_deviation_extended"].get<double>() <= 1e-6);
  CHECK(cmp["closure_error_extended"].get<double>() <= 1e-6);
}

TEST_CASE("portrait and random commands") {
  const fs::path s = fresh_dir("portrait_src");
  REQUIRE(run(s, {"solve", "--pattern", alternating(), "--c", "24"}).code == 0);
  const fs::path d = fresh_dir("portrait");
  const Run r = run(d, {"portrait", "--state-file", (s / "solve_state.csv").string(),
                        "--zoom", "-0.05", "0.05", "-0.05", "0.05"});
  CHECK(r.code == 0);
  CHECK(load(d / "portrait_class.json")["distinct_points"] == 20);
  CHECK(fs::exists(d / "portrait_boxes.csv"));
  CHECK(load(d / "portrait_zoom.json")["levels"].size() == 2);

  const Run a = run(d, {"random", "30", "--seed", "7"});
  const Run b = run(d, {"random", "30", "--seed", "7"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.size() == 31);
  CHECK(run(d, {"random", "0"}).code == 2);
}

TEST_CASE("output directory defaults to the environment") {
  const fs::path d = fresh_dir("env");
  ::setenv("DNSE_OUT_DIR", d.string().c_str(), 1);
  std::ostringstream out, err;
  CHECK(dnse::cli::run({"dnse", "random", "5"}, out, err) == 0);
  ::unsetenv("DNSE_OUT_DIR");
  CHECK(fs::exists(d / "run.json"));
  CHECK(fs::exists(d / "random.txt"));
}
