#include "fluxlab/config.hpp"

#include "fluxlab/error.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <fstream>
#include <sstream>

namespace fluxlab {

namespace pt = boost::property_tree;

namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorCode::ConfigError, what); }

std::vector<double> numbers(const std::string& text, const std::string& key) {
  std::string cleaned = text;
  for (char& ch : cleaned)
    if (ch == ',') ch = ' ';
  std::istringstream in(cleaned);
  std::vector<double> out;
  double x;
  while (in >> x) out.push_back(x);
  if (!in.eof()) fail("key '" + key + "' expects numbers, got '" + text + "'");
  return out;
}

template <typename T>
T get(const pt::ptree& tree, const std::string& key, T fallback) {
  if (!tree.get_optional<std::string>(key)) return fallback;
  // the overload taking a default swallows conversion errors
  try {
    return tree.get<T>(key);
  } catch (const pt::ptree_error&) {
    fail("cannot read key '" + key + "'");
  }
}

Vec2 get_point(const pt::ptree& tree, const std::string& key, Vec2 fallback) {
  auto text = tree.get_optional<std::string>(key);
  if (!text) return fallback;
  auto v = numbers(*text, key);
  if (v.size() != 2) fail("key '" + key + "' expects two numbers");
  return {v[0], v[1]};
}

Vec2 require_point(const pt::ptree& tree, const std::string& key) {
  if (!tree.get_optional<std::string>(key)) fail("missing key '" + key + "'");
  return get_point(tree, key, {});
}

double require(const pt::ptree& tree, const std::string& key) {
  if (!tree.get_optional<std::string>(key)) fail("missing key '" + key + "'");
  return get<double>(tree, key, 0.0);
}

Shape read_shape(const pt::ptree& tree, const std::string& section, const std::string& kind_key) {
  const std::string kind = get<std::string>(tree, section + "." + kind_key, "disk");
  if (kind == "disk") return Disk{require_point(tree, section + ".center"), require(tree, section + ".radius")};
  if (kind == "rect") return Rect{require_point(tree, section + ".lo"), require_point(tree, section + ".hi")};
  fail("unknown shape '" + kind + "' in [" + section + "]");
}

}  // namespace

Eigen::VectorXd ExperimentConfig::flux_direction() const {
  const auto k = static_cast<Eigen::Index>(domain.holes.size());
  Eigen::VectorXd d = Eigen::VectorXd::Ones(k);
  for (Eigen::Index i = 0; i < k && i < static_cast<Eigen::Index>(sweep.direction.size()); ++i)
    d[i] = sweep.direction[i];
  return d;
}

ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    fail(std::string("malformed config: ") + e.what());
  }

  ExperimentConfig cfg;
  cfg.name = get<std::string>(tree, "experiment.name", cfg.name);

  cfg.domain.outer = read_shape(tree, "domain", "outer");
  cfg.domain.spacing = require(tree, "domain.spacing");
  const int holes = get<int>(tree, "domain.holes", 0);
  if (holes < 0) fail("hole count must be non-negative");
  for (int i = 1; i <= holes; ++i) {
    const std::string section = "hole" + std::to_string(i);
    if (!tree.get_child_optional(section)) fail("missing section [" + section + "]");
    cfg.domain.holes.push_back(read_shape(tree, section, "shape"));
  }

  auto& p = cfg.potential;
  p.kind = get<std::string>(tree, "potential.kind", p.kind);
  p.center = get_point(tree, "potential.center", p.center);
  p.r0 = get<double>(tree, "potential.r0", p.r0);
  p.width = get<double>(tree, "potential.width", p.width);
  p.strength = get<double>(tree, "potential.strength", p.strength);
  if (auto table = tree.get_optional<std::string>("potential.table")) {
    p.table = *table;
    if (p.table.is_relative()) p.table = base_dir / p.table;
  }
  if (p.kind != "zero" && p.kind != "radial_well" && p.kind != "bump" && p.kind != "table")
    fail("unknown potential kind '" + p.kind + "'");
  if (p.kind == "table" && p.table.empty()) fail("potential kind 'table' needs a table path");
  if (p.kind == "table" && !std::filesystem::exists(p.table)) fail("potential table " + p.table.string() + " not found");

  auto& s = cfg.sweep;
  s.start = get<double>(tree, "sweep.start", s.start);
  s.stop = get<double>(tree, "sweep.stop", s.stop);
  s.step = get<double>(tree, "sweep.step", s.step);
  if (auto dir = tree.get_optional<std::string>("sweep.direction")) s.direction = numbers(*dir, "sweep.direction");
  if (!(s.step > 0)) fail("sweep step must be positive");
  if (s.stop < s.start) fail("sweep stop lies below start");

  auto& solver = cfg.solver;
  solver.m = get<int>(tree, "solver.m", solver.m);
  solver.options.tol = get<double>(tree, "solver.tol", solver.options.tol);
  solver.options.seed = get<std::uint64_t>(tree, "solver.seed", solver.options.seed);
  solver.cluster_tol = get<double>(tree, "solver.cluster_tol", solver.cluster_tol);
  if (solver.m < 3) fail("solver.m must be at least 3");
  if (!(solver.options.tol > 0) || !(solver.cluster_tol > 0)) fail("solver tolerances must be positive");

  auto& c = cfg.circle;
  c.n = get<int>(tree, "circle.n", c.n);
  if (auto a = tree.get_optional<std::string>("circle.alphas")) c.alphas = numbers(*a, "circle.alphas");
  c.epsilon = get<double>(tree, "circle.epsilon", c.epsilon);
  c.cluster_tol = get<double>(tree, "circle.cluster_tol", c.cluster_tol);
  if (!(c.cluster_tol > 0)) fail("circle.cluster_tol must be positive");
  if (c.n < 64) fail("circle.n must be at least 64");

  auto& slit = cfg.slit;
  slit.family = get<std::string>(tree, "slit.family", slit.family);
  slit.count = get<int>(tree, "slit.count", slit.count);
  slit.refine = get<int>(tree, "slit.refine", slit.refine);
  if (slit.family != "radial" && slit.family != "shortest") fail("unknown slit family '" + slit.family + "'");
  if (slit.refine < 2) fail("slit.refine must be at least 2");

  auto& mult = cfg.multiplicity;
  mult.bump_center = get_point(tree, "multiplicity.bump_center", mult.bump_center);
  mult.bump_width = get<double>(tree, "multiplicity.bump_width", mult.bump_width);
  mult.bump_height = get<double>(tree, "multiplicity.bump_height", mult.bump_height);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open config " + path.string());
  return parse_config(in, path.parent_path());
}

PotentialField make_potential(const PotentialSpec& spec, const GridDomain& grid) {
  if (spec.kind == "zero") return zero_potential(grid.num_vertices());
  if (spec.kind == "radial_well") return radial_well(grid, spec.center, spec.r0, spec.width, spec.strength);
  if (spec.kind == "bump") return gaussian_bump(grid, spec.center, spec.width, spec.strength);
  if (spec.kind == "table") {
    std::ifstream in(spec.table);
    if (!in) fail("cannot open potential table " + spec.table.string());
    std::vector<Eigen::Vector3d> rows;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      auto v = numbers(line, spec.table.string());
      if (v.size() != 3) fail("potential table rows need x y value");
      rows.emplace_back(v[0], v[1], v[2]);
    }
    if (rows.empty()) fail("potential table is empty");
    return potential_from_table(grid, rows);
  }
  fail("unknown potential kind '" + spec.kind + "'");
}

}  // namespace fluxlab
