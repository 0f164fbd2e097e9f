#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "volform/field_io.hpp"
#include "volform/grid.hpp"
#include "volform/run_config.hpp"

using namespace volform;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("volform_test_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("field files round trip bit for bit") {
  TempDir tmp;
  const TorusGrid g = make_grid(2, 8, 5);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);

  SpatialField f(g.spatial_size());
  for (double& x : f.v) x = dist(rng);
  const std::string spath = (tmp.path / "phi.f64").string();
  write_spatial_field(spath, f, g);
  CHECK(fs::exists(tmp.path / "phi.meta.json"));
  const SpatialField back = read_spatial_field(spath, g);
  CHECK(sup_diff(f.v, back.v) == 0.0);

  SpacetimeField st(g.total_size());
  for (double& x : st.v) x = dist(rng);
  const std::string tpath = (tmp.path / "full.f64").string();
  write_spacetime_field(tpath, st, g);
  const SpacetimeField stback = read_spacetime_field(tpath, g);
  CHECK(sup_diff(st.v, stback.v) == 0.0);

  // sidecar mismatch is an error
  const TorusGrid gother = make_grid(2, 8, 7);
  CHECK_THROWS_AS(read_spacetime_field(tpath, gother), std::runtime_error);
}

TEST_CASE("csv export walks nodes in index order") {
  TempDir tmp;
  const TorusGrid g = make_grid(1, 4, 3);
  SpatialField f(g.spatial_size());
  for (int i = 0; i < f.size(); ++i) f[i] = i * 0.5;
  const std::string path = (tmp.path / "f.csv").string();
  write_spatial_csv(path, f, g);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "0,0");
  std::getline(in, line);
  CHECK(line == "1,0.5");
}

TEST_CASE("config parsing happy path") {
  const std::string text = R"(
# comment
[grid]
dim = 2
n = 12
nt = 9

[solver]
epsilon = 0.5
s_steps = 8
eps_schedule = 1, 0.5, 0.25

[boundary]
phi0 = 1 0 0.01 0.0
phi0 = 0 1 0.02 0.5
phi1 = 1 1 -0.015 0.25

[experiment]
seed = 7
samples = 99
lambdas = 0, 0.5, 1
)";
  const RunConfig cfg = parse_config_text(text, "inline");
  CHECK(cfg.dim == 2);
  CHECK(cfg.n == 12);
  CHECK(cfg.nt == 9);
  CHECK(cfg.solver.epsilon == 0.5);
  CHECK(cfg.solver.s_steps == 8);
  REQUIRE(cfg.solver.eps_schedule.size() == 3);
  CHECK(cfg.phi0.modes.size() == 2);
  CHECK(cfg.phi0.modes[1].k[1] == 1);
  CHECK(cfg.phi1.modes.size() == 1);
  CHECK(cfg.experiment.seed == 7);
  CHECK(cfg.experiment.samples == 99);
  REQUIRE(cfg.experiment.lambdas.size() == 3);

  const TorusGrid g = cfg.grid();
  const BoundaryPair b = cfg.boundary(g);
  CHECK(b.phi0.size() == g.spatial_size());
}

TEST_CASE("config parsing errors are line precise") {
  auto expect_fail = [](const std::string& text, const std::string& needle) {
    try {
      parse_config_text(text, "cfg");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      const std::string what = e.what();
      INFO(what);
      CHECK(what.find(needle) != std::string::npos);
    }
  };

  expect_fail("[grid]\nbogus = 1\n", "cfg:2");
  expect_fail("[grid]\nn 12\n", "expected key = value");
  expect_fail("dim = 1\n", "outside any section");
  expect_fail("[nope]\n", "unknown section");
  expect_fail("[grid]\ndim = 1\n[boundary]\nphi0 = 1 0.1\n", "trig mode needs");
  // inadmissible amplitude: bound sum |a| (2 pi |k|)^2 >= 1
  expect_fail("[grid]\ndim = 1\n[boundary]\nphi0 = 1 0.5 0\n", "rejected");
}

TEST_CASE("point specs") {
  const BoundarySpec c = parse_point_spec("const:0.75", 1);
  REQUIRE(c.modes.size() == 1);
  CHECK(c.modes[0].amplitude == 0.75);
  CHECK(c.modes[0].k[0] == 0);

  const BoundarySpec t = parse_point_spec("trig:1 0.2 0,2 0.01 1.5", 1);
  CHECK(t.modes.size() == 2);

  const BoundarySpec f = parse_point_spec("file:/tmp/x.f64", 1);
  CHECK(f.file == "/tmp/x.f64");

  CHECK_THROWS_AS(parse_point_spec("what:ever", 1), ConfigError);
  CHECK_THROWS_AS(parse_point_spec("const:abc", 1), ConfigError);
  CHECK_THROWS_AS(parse_point_spec("trig:1 0.9 0", 1), ConfigError);
}
