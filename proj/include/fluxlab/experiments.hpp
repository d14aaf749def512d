#pragma once

#include "fluxlab/config.hpp"
#include "fluxlab/cover.hpp"
#include "fluxlab/eigensolver.hpp"
#include "fluxlab/gauge.hpp"
#include "fluxlab/nodal.hpp"
#include "fluxlab/operator.hpp"

#include <array>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace fluxlab {

/// Outcome of one checked claim. `claim` states the property in words and
/// formulas; `detail` carries the measured numbers.
struct Verdict {
  std::string claim;
  bool passed = false;
  std::string detail;
};

bool all_passed(const std::vector<Verdict>& verdicts);
/// "PASS|FAIL  experiment  claim  (detail)" per line.
void write_verdicts(std::ostream& os, const std::string& experiment, const std::vector<Verdict>& verdicts);

/// Runs f(0), ..., f(count - 1) on a pool of worker threads. Each index is
/// handled exactly once; exceptions from f are rethrown after all workers
/// stop.
void parallel_for(int count, const std::function<void(int)>& f);

/// Lowest eigenpairs of a magnetic or real Hamiltonian with the config's
/// solver options.
EigenResult<Complex> solve_lowest(const MagneticHamiltonian& H, int m, const SolverSpec& spec);
EigenResult<double> solve_lowest(const Eigen::SparseMatrix<double>& H, int m, const SolverSpec& spec);

/// Whether z -> 2c - z maps the active lattice and the potential onto
/// themselves, c being the reference point of the outer shape.
bool point_symmetric(const GridDomain& grid, const PotentialField& potential, const Vec2& c);

/// Ground level of the Neumann operator with every circulation equal to 1/2,
/// with the objects needed to study its nodal sets.
struct HalfFluxGround {
  LinkField field;
  MagneticHamiltonian H;
  EigenResult<Complex> spectrum;
  int multiplicity = 0;
  CoverGraph cover;
  ThetaField theta;
  KOperator K;
  /// Orthonormal K-fixed basis of the ground cluster.
  Eigen::MatrixXcd representatives;
};
HalfFluxGround half_flux_ground(const GridDomain& grid, const PotentialField& potential, const SolverSpec& spec);

struct SweepRow {
  double t = 0.0;
  Eigen::VectorXd flux;
  std::array<double, 3> lambda{};
  int multiplicity = 0;
  double residual = 0.0;
  /// lambda1 at flux + (1, ..., 1), from an independently assembled operator
  double lambda1_shifted = 0.0;
  std::string error;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  double max_periodicity_defect = 0.0;
  double max_symmetry_defect = 0.0;
  /// lambda1(0.25 d) - lambda1(0); NaN when 0.25 is not sampled
  double margin_at_quarter = 0.0;
  std::vector<Verdict> verdicts;
};

/// lambda1..3 along the flux line t * d, t from start to stop. Rows are
/// solved in parallel and ordered by t.
SweepResult run_flux_sweep(const ExperimentConfig& cfg);
void write_sweep_csv(std::ostream& os, const SweepResult& result);

struct CircleRow {
  double alpha = 0.0;
  double epsilon = 0.0;
  std::array<double, 3> lambda{};
  double exact = 0.0;
  /// relative to the exact value, absolute when that is zero
  double error = 0.0;
  int multiplicity = 0;
};

struct CircleResult {
  int n = 0;
  std::vector<CircleRow> rows;
  /// max error / (2 pi / n)^2 over unperturbed rows
  double fitted_c = 0.0;
  double split_gap = 0.0;
  std::vector<Verdict> verdicts;
};

CircleResult run_circle_check(const ExperimentConfig& cfg);
void write_circle_csv(std::ostream& os, const CircleResult& result);

struct SlitRow {
  int level = 0;
  double spacing = 0.0;
  /// ray angle (radial) or angle of the outer start vertex (shortest)
  double angle = 0.0;
  int length = 0;
  double lambda = 0.0;
};

struct SlitLevel {
  double spacing = 0.0;
  double reference = 0.0;
  double minimum = 0.0;
  double gap = 0.0;
  int slits = 0;
};

struct SlitResult {
  std::vector<SlitRow> rows;
  SlitLevel coarse;
  SlitLevel fine;
  double ratio = 0.0;
  std::vector<Verdict> verdicts;
};

/// Minimum over a slit family of the zero-field ground energy with a Dirichlet
/// condition on the slit, against lambda1 at half flux, on the configured grid
/// and on one refined by slit.refine.
SlitResult run_slit_infimum(const ExperimentConfig& cfg);
void write_slit_csv(std::ostream& os, const SlitResult& result);

struct MultiplicityResult {
  bool symmetric = false;
  Eigen::VectorXd plain;
  int plain_multiplicity = 0;
  Eigen::VectorXd perturbed;
  int perturbed_multiplicity = 0;
  std::optional<SlitReport> perturbed_report;
  NodalSet perturbed_set;
  std::vector<Verdict> verdicts;
};

MultiplicityResult run_multiplicity_experiment(const ExperimentConfig& cfg);

struct CoverRow {
  std::string domain;
  std::string block;
  int index = 0;
  double lifted = 0.0;
  double base = 0.0;
};

struct CoverResult {
  std::vector<CoverRow> rows;
  double intertwiner_residual = 0.0;
  double intertwiner_limit = 0.0;
  std::vector<Verdict> verdicts;
};

/// Spectra of the (anti)symmetric blocks of the lifted operator against the
/// half-flux and zero-flux magnetic spectra, on the circle with n = 64 and on
/// the configured domain.
CoverResult run_cover_equivalence(const ExperimentConfig& cfg);
void write_cover_csv(std::ostream& os, const CoverResult& result);

struct NodalEntry {
  NodalSet set;
  SlitReport report;
  bool sheets_agree = false;
  /// every proper subcollection fails the parity check
  bool minimal = false;
  double imaginary_defect = 0.0;
};

struct NodalResult {
  Eigen::VectorXd ground;
  int multiplicity = 0;
  std::vector<NodalEntry> entries;
  std::optional<PairCheck> pair;
  std::vector<Verdict> verdicts;
};

/// Nodal sets of the K-fixed half-flux ground representatives.
NodalResult run_nodal_experiment(const ExperimentConfig& cfg);
void write_nodal_reports(std::ostream& os, const NodalResult& result);

}  // namespace fluxlab
