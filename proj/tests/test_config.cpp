#include "support.hpp"

#include "fluxlab/config.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace fluxlab;
using testing::code_of;

namespace {

const std::string kMinimal = R"(
[domain]
outer = disk
center = 0 0
radius = 1
spacing = 0.05
holes = 1

[hole1]
center = 0.1, 0
radius = 0.3
)";

ExperimentConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

}  // namespace

TEST_CASE("minimal config takes the documented defaults") {
  ExperimentConfig cfg = parse(kMinimal);
  CHECK(cfg.domain.spacing == 0.05);
  REQUIRE(cfg.domain.holes.size() == 1);
  const Disk& hole = std::get<Disk>(cfg.domain.holes[0]);
  CHECK(hole.center == Vec2(0.1, 0.0));
  CHECK(hole.radius == 0.3);
  CHECK(cfg.potential.kind == "zero");
  CHECK(cfg.sweep.step == 0.025);
  CHECK(cfg.solver.m == 3);
  CHECK(cfg.solver.cluster_tol == 1e-3);
  CHECK(cfg.solver.options.seed == 0x5EED);
  CHECK(cfg.circle.n == 256);
  CHECK(cfg.circle.cluster_tol == 1e-6);
  CHECK(cfg.slit.family == "radial");
  CHECK(cfg.flux_direction() == Eigen::VectorXd::Ones(1));
}

TEST_CASE("shipped configs load") {
  const std::filesystem::path dir = FLUXLAB_CONFIG_DIR;
  for (const char* name : {"annulus.cfg", "two_hole.cfg", "offcenter.cfg", "asymmetric.cfg"}) {
    CAPTURE(name);
    ExperimentConfig cfg = load_config(dir / name);
    CHECK_FALSE(cfg.domain.holes.empty());
    CHECK(build_grid(cfg.domain).num_vertices() > 1000);
  }
  ExperimentConfig two = load_config(dir / "two_hole.cfg");
  CHECK(two.flux_direction() == Eigen::Vector2d(1, 1));
  CHECK(std::holds_alternative<Rect>(two.domain.outer));
}

TEST_CASE("malformed configs raise ConfigError") {
  CHECK(code_of([] { parse("[domain\nouter = disk"); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { parse("[domain]\nouter = disk\ncenter = 0 0\nradius = 1\n"); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { parse("[domain]\nouter = blob\nspacing = 0.1\n"); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { parse(kMinimal + "[sweep]\nstep = 0\n"); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { parse(kMinimal + "[sweep]\nstart = 1\nstop = 0\n"); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { parse(kMinimal + "[solver]\nm = 2\n"); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { parse(kMinimal + "[solver]\ntol = abc\n"); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { parse(kMinimal + "[circle]\nn = 32\n"); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { parse(kMinimal + "[slit]\nfamily = spiral\n"); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { parse(kMinimal + "[slit]\nrefine = 1\n"); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { parse(kMinimal + "[potential]\nkind = magic\n"); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { parse(kMinimal + "[potential]\nkind = table\ntable = /no/such/file\n"); }) ==
        ErrorCode::ConfigError);
  CHECK(code_of([] { parse(kMinimal + "[potential]\ncenter = 1 2 3\n"); }) == ErrorCode::ConfigError);
  std::string two_holes = kMinimal;
  two_holes.replace(two_holes.find("holes = 1"), 9, "holes = 2");
  CHECK(code_of([&] { parse(two_holes); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { load_config("/no/such/config.cfg"); }) == ErrorCode::ConfigError);
}

TEST_CASE("potentials from the config") {
  ExperimentConfig cfg = parse(kMinimal + "[potential]\nkind = bump\ncenter = 0.6 0\nwidth = 0.1\nstrength = 7\n");
  GridDomain g = build_grid(cfg.domain);
  PotentialField V = make_potential(cfg.potential, g);
  CHECK(V.values.maxCoeff() == doctest::Approx(7.0).epsilon(0.01));
  CHECK(V.values.minCoeff() >= 0.0);

  const auto table = std::filesystem::temp_directory_path() / "fluxlab_potential_table.txt";
  {
    std::ofstream out(table);
    out << "# x y value\n-1 0 2\n1 0 5\n";
  }
  cfg = parse(kMinimal + "[potential]\nkind = table\ntable = " + table.string() + "\n");
  V = make_potential(cfg.potential, build_grid(cfg.domain));
  // x = 0 is a tie, resolved in favor of the first row
  for (int v = 0; v < g.num_vertices(); ++v) CHECK(V.values[v] == (g.position(v).x() <= 0 ? 2.0 : 5.0));
  std::filesystem::remove(table);
}
