#pragma once

#include "fluxlab/eigensolver.hpp"
#include "fluxlab/geometry.hpp"
#include "fluxlab/operator.hpp"

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

namespace fluxlab {

struct PotentialSpec {
  /// zero | radial_well | bump | table
  std::string kind = "zero";
  Vec2 center{0.0, 0.0};
  double r0 = 0.0;
  double width = 0.1;
  /// depth of the radial well or height of the bump
  double strength = 0.0;
  std::filesystem::path table;
};

struct SweepSpec {
  double start = 0.0;
  double stop = 1.0;
  double step = 0.025;
  /// Flux vector at sweep parameter t is t * direction; defaults to all ones.
  std::vector<double> direction;
};

struct SolverSpec {
  int m = 3;
  SolverOptions options;
  /// Loose enough for staircase domains, where lattice effects split
  /// continuum degeneracies.
  double cluster_tol = 1e-3;
};

struct CircleSpec {
  int n = 256;
  std::vector<double> alphas{0.0, 0.1, 0.25, 0.4, 0.5};
  double epsilon = 0.01;
  double cluster_tol = 1e-6;
};

struct SlitSpec {
  /// radial | shortest
  std::string family = "radial";
  int count = 32;
  int refine = 2;
};

struct MultiplicitySpec {
  Vec2 bump_center{0.65, 0.0};
  double bump_width = 0.1;
  double bump_height = 50.0;
};

struct ExperimentConfig {
  std::string name = "experiment";
  DomainSpec domain;
  PotentialSpec potential;
  SweepSpec sweep;
  SolverSpec solver;
  CircleSpec circle;
  SlitSpec slit;
  MultiplicitySpec multiplicity;
  std::filesystem::path out_dir = "runs";

  /// Sweep direction padded to the hole count.
  Eigen::VectorXd flux_direction() const;
};

/// INI-style configuration; see configs/annulus.cfg for every key. Hole i is
/// described in section [hole<i>]. Relative table paths resolve against
/// `base_dir`. Throws ConfigError.
ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = ".");
ExperimentConfig load_config(const std::filesystem::path& path);

/// Potential described by the config, sampled on the grid. Throws ConfigError
/// for unknown kinds or unreadable tables.
PotentialField make_potential(const PotentialSpec& spec, const GridDomain& grid);

}  // namespace fluxlab
