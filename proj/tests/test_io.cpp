#include <cmath>
#include <filesystem>
#include <random>
#include <string>

#include "doctest.h"
#include "support.hpp"

#include "dnse/io.hpp"

using namespace dnse;
namespace fs = std::filesystem;
using support::error_kind_of;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "dnse_io_tests";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("doubles print with 17 significant digits") {
  CHECK(io::format_double(0.1) == "0.10000000000000001");
  CHECK(io::format_double(-17.0) == "-17");
  CHECK(std::stod(io::format_double(M_PI)) == M_PI);
}

TEST_CASE("state CSV round trip is exact") {
  std::mt19937_64 rng(51);
  const LatticeState s = support::random_state(40, Boundary::kOpen, rng);
  const std::string csv = io::state_csv(s);
  CHECK(csv.rfind("index,psi\n0,", 0) == 0);
  CHECK(io::parse_state_csv(csv, Boundary::kOpen) == s);

  const fs::path path = scratch("state.csv");
  io::write_state(path, s, {Boundary::kOpen, 24.0, -0.4});
  CHECK(io::sidecar_path(path) == scratch("state.json"));
  const io::LoadedState back = io::read_state(path);
  CHECK(back.state == s);
  CHECK(back.meta.boundary == Boundary::kOpen);
  CHECK(back.meta.c == 24.0);
  REQUIRE(back.meta.energy.has_value());
  CHECK(*back.meta.energy == -0.4);

  const auto side = io::state_sidecar_json(s, {Boundary::kPeriodic, 3.0, {}});
  CHECK(side["N"] == 40);
  CHECK(side["boundary"] == "periodic");
  CHECK(side["E"].is_null());
}

TEST_CASE("malformed state files are input errors") {
  CHECK(error_kind_of([] {
          io::parse_state_csv("i,p\n0,1\n", Boundary::kOpen);
        }) == ErrorKind::kInvalidArgument);
  CHECK(error_kind_of([] {
          io::parse_state_csv("index,psi\n1,1\n", Boundary::kOpen);
        }) == ErrorKind::kInvalidArgument);
  CHECK(error_kind_of([] {
          io::parse_state_csv("index,psi\n0,abc\n", Boundary::kOpen);
        }) == ErrorKind::kInvalidArgument);
  CHECK(error_kind_of([] { io::read_state(scratch("missing.csv")); }) ==
        ErrorKind::kIo);
}

TEST_CASE("tabular formats") {
  const MapOrbit o = iterate_map({0.5, 0.0}, 1.0, 0.0, 3);
  CHECK(io::orbit_csv(o).rfind("step,psi,Z\n0,0.5,0\n", 0) == 0);

  const PhasePortrait p{{{1, -1}, {0, 0}}, PortraitSource::kLattice, true};
  CHECK(io::portrait_csv(p) == "psi,dpsi\n1,-1\n0,0\n");

  BoxCountResult b;
  b.rows = {{0.5, 3}, {0.25, 7}};
  CHECK(io::box_count_csv(b) == "scale,occupied\n0.5,3\n0.25,7\n");

  CHECK(io::sweep_csv({}) ==
        "c,E,converged,n,m,l,max_amp,structure_changed,iterations,status\n");
  SweepRecord r;
  r.c = 24;
  r.energy = -0.5;
  r.converged = true;
  r.status = NewtonStatus::kConverged;
  r.counts = {10, 10, 0};
  r.max_amplitude = 0.25;
  r.iterations = 7;
  const std::vector<SweepRecord> rows{r};
  CHECK(io::sweep_csv(rows) ==
        "c,E,converged,n,m,l,max_amp,structure_changed,iterations,status\n"
        "24,-0.5,1,10,10,0,0.25,0,7,converged\n");
}

TEST_CASE("json reports") {
  const auto counts = io::counts_json({2, 1, 1}, 40.0);
  CHECK(counts["n"] == 2);
  CHECK(counts["m"] == 1);
  CHECK(counts["l"] == 1);
  CHECK(counts["E_infinity"] == -17.0);
  CHECK(io::counts_json({2, 1, 1})["E_infinity"].is_null());

  const NewtonResult res = newton_solve(
      build_asymptotic_state(parse_pattern("+0-", Boundary::kPeriodic)),
      {40.0, Boundary::kPeriodic});
  const auto rep = io::report_json(res, 99u);
  CHECK(rep["seed"] == 99);
  CHECK(rep["converged"] == true);
  CHECK(rep["failed"] == false);
  CHECK(rep["E_history"].size() == rep["residual_history"].size());
  CHECK(rep["counts"]["n"] == 2);
  CHECK(io::report_json(res, std::nullopt)["seed"].is_null());

  PortraitClass cls;
  cls.label = PortraitLabel::kRegularPeriodic;
  cls.period = 20;
  cls.distinct_points = 20;
  cls.tol = 1e-6;
  const auto cj = io::classification_json(cls);
  CHECK(cj["label"] == "regular_periodic");
  CHECK(cj["period"] == 20);
  CHECK(cj["distinct_points"] == 20);
}

TEST_CASE("atomic text writes") {
  const fs::path path = scratch("atomic.txt");
  io::write_text_atomic(path, "one");
  io::write_text_atomic(path, "two");
  CHECK(io::read_text(path) == "two");
  for (const auto& entry : fs::directory_iterator(path.parent_path())) {
    CHECK(entry.path().filename().string().find(".tmp") == std::string::npos);
  }
}
