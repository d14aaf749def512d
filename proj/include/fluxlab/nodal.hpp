#pragma once

#include "fluxlab/cover.hpp"
#include "fluxlab/geometry.hpp"

#include <Eigen/Core>

#include <array>
#include <ostream>
#include <string>
#include <vector>

namespace fluxlab {

struct Polyline {
  std::vector<Vec2> points;
  /// Boundary component of each end; -1 when the end could not be classified
  /// or the polyline is closed.
  std::array<int, 2> endpoint_labels{-1, -1};
  bool closed = false;
  /// Base cells the polyline passes through.
  std::vector<int> cells;
};

/// Zero contour of a real antisymmetric cover function, projected to the base.
struct NodalSet {
  std::vector<Polyline> polylines;
  /// Per base cell: crossed by the contour.
  std::vector<char> cell_mask;
  /// Cells where all four edges carry a crossing; resolved by the sign of the
  /// cell average.
  int saddle_cells = 0;
};

/// Marching squares over the full cells of the base grid. Each cell is lifted
/// to the cover starting from `sheet` at its lower-left corner, crossings are
/// placed by linear interpolation along cell edges, and segments are chained
/// into polylines by shared edges. Exact zeros take the sign of their first
/// nonzero cover neighbor, scaled to 1e-300.
NodalSet extract_nodal_set(const Eigen::VectorXd& f, const CoverGraph& cover, const GridDomain& grid, int sheet = 0);

/// Rebuilds the cell mask from the polylines' cells.
void refresh_mask(NodalSet& set, const GridDomain& grid);
NodalSet without_polyline(const NodalSet& set, std::size_t index, const GridDomain& grid);
NodalSet merge(const NodalSet& a, const NodalSet& b, const GridDomain& grid);

struct SlitReport {
  int n_lines = 0;
  int closed_loops = 0;
  std::vector<int> endpoints_per_component;
  int unclassified_endpoints = 0;
  /// every interior boundary component has an odd number of line ends
  bool parity_ok = false;
  /// every line joins two different boundary components
  bool distinct_ends_ok = false;
  int complement_components = 0;
  bool complement_connected = false;
  int cover_domain_count = 0;
  /// k/2 <= n_lines <= k
  bool bounds_ok = false;

  /// All conditions for a nodal set that cuts the domain into one piece with
  /// odd line parity at each hole.
  bool slits() const {
    return closed_loops == 0 && unclassified_endpoints == 0 && parity_ok && distinct_ends_ok &&
           complement_connected && bounds_ok;
  }
};

SlitReport topology_report(const NodalSet& set, const GridDomain& grid, const CoverGraph& cover);

/// Single-line JSON record.
std::string to_json(const SlitReport& report);

struct PairCheck {
  bool disjoint = false;
  int shared_cells = 0;
  /// min over interior vertices of |u1 + i u2| / max |u1 + i u2|
  double min_combination_ratio = 0.0;
  bool combination_nonvanishing = false;
  NodalSet first;
  NodalSet second;
  bool passed() const { return disjoint && combination_nonvanishing; }
};

/// Two orthogonal K-fixed ground states of a doubly degenerate level: their
/// nodal sets must not meet and u1 + i u2 must not vanish in the interior.
PairCheck degenerate_pair_check(const Eigen::VectorXcd& u1, const Eigen::VectorXcd& u2, int multiplicity,
                                const GridDomain& grid, const CoverGraph& cover, const ThetaField& theta);

/// Zeros of a real antisymmetric function on the cover of the n-point circle,
/// as angles in [0, 2 pi).
std::vector<double> circle_nodal_points(const Eigen::VectorXd& f, const CoverGraph& cover, int n);

/// Domain outline (boundary edges of the full-cell complex) with nodal
/// polylines on top, one color per set.
void write_svg(std::ostream& os, const GridDomain& grid, const std::vector<NodalSet>& sets);
/// "# polyline k closed labels a b" header followed by "x y" rows.
void write_polylines(std::ostream& os, const NodalSet& set);

}  // namespace fluxlab
