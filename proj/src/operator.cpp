#include "fluxlab/operator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace fluxlab {

MagneticHamiltonian assemble_magnetic(const GridDomain& grid, const LinkField& field, const PotentialField& potential,
                                      BoundaryCondition bc) {
  std::vector<char> removed;
  switch (bc) {
    case BoundaryCondition::Neumann:
      break;
    case BoundaryCondition::Dirichlet:
      removed.assign(grid.num_vertices(), 0);
      for (int v = 0; v < grid.num_vertices(); ++v) removed[v] = grid.is_boundary(v);
      break;
    case BoundaryCondition::SlitDirichlet:
      throw Error(ErrorCode::InvalidArgument, "use assemble_slit for slit boundary conditions");
  }
  return assemble_on_graph<Complex>(grid.graph(), &field, potential, grid.spacing(), removed, bc);
}

MagneticHamiltonian assemble_slit(const GridDomain& grid, const LinkField& field, const PotentialField& potential,
                                  const SlitPath& slit) {
  validate_slit(grid, slit);
  std::vector<char> removed(grid.num_vertices(), 0);
  for (int v : slit.vertices) removed[v] = 1;
  return assemble_on_graph<Complex>(grid.graph(), &field, potential, grid.spacing(), removed,
                                    BoundaryCondition::SlitDirichlet);
}

Graph circle_graph(int n) {
  if (n < 8) throw Error(ErrorCode::TooFewPoints, "circle needs at least 8 points, got " + std::to_string(n));
  Graph g;
  g.num_vertices = n;
  for (int j = 0; j < n; ++j) g.edges.push_back({j, (j + 1) % n});
  g.finalize();
  return g;
}

LinkField circle_field(int n, double alpha) {
  if (n < 8) throw Error(ErrorCode::TooFewPoints, "circle needs at least 8 points, got " + std::to_string(n));
  return LinkField{Eigen::VectorXd::Constant(n, alpha * 2.0 * std::numbers::pi / n)};
}

MagneticHamiltonian assemble_circle(int n, double alpha) {
  return assemble_circle(n, alpha, zero_potential(std::max(n, 0)));
}

MagneticHamiltonian assemble_circle(int n, double alpha, const PotentialField& potential) {
  Graph g = circle_graph(n);
  LinkField field = circle_field(n, alpha);
  return assemble_on_graph<Complex>(g, &field, potential, 2.0 * std::numbers::pi / n, {},
                                    BoundaryCondition::Neumann);
}

void validate_slit(const GridDomain& grid, const SlitPath& slit) {
  const auto& path = slit.vertices;
  if (path.size() < 2) throw Error(ErrorCode::BadSlit, "slit needs at least two vertices");
  for (int v : path)
    if (v < 0 || v >= grid.num_vertices()) throw Error(ErrorCode::BadSlit, "slit vertex out of range");
  for (std::size_t k = 0; k + 1 < path.size(); ++k)
    if (!grid.edge_between(path[k], path[k + 1]))
      throw Error(ErrorCode::BadSlit, "consecutive slit vertices are not lattice neighbors");
  const int a = grid.boundary_label(path.front());
  const int b = grid.boundary_label(path.back());
  if (a < 0 || b < 0) throw Error(ErrorCode::BadSlit, "slit endpoints must lie on the boundary");
  if (a == b) throw Error(ErrorCode::BadSlit, "slit endpoints lie on the same boundary component");
  if (slit.from_label != a || slit.to_label != b)
    throw Error(ErrorCode::BadSlit, "slit endpoint labels do not match the grid");
  for (std::size_t k = 1; k + 1 < path.size(); ++k)
    if (grid.is_boundary(path[k])) throw Error(ErrorCode::BadSlit, "slit interior touches the boundary");
}

namespace {

// 4-connected lattice points along the segment a -> b.
std::vector<LatticeIndex> digital_segment(double h, const Vec2& a, const Vec2& b) {
  std::vector<LatticeIndex> out;
  const double len = (b - a).norm();
  const int steps = std::max(1, static_cast<int>(std::ceil(8.0 * len / h)));
  const Vec2 dir = len > 0 ? Vec2((b - a) / len) : Vec2(1.0, 0.0);
  auto dist_to_line = [&](const LatticeIndex& p) {
    Vec2 q = Vec2(p.i * h, p.j * h) - a;
    return std::abs(q.x() * dir.y() - q.y() * dir.x());
  };
  for (int s = 0; s <= steps; ++s) {
    Vec2 p = a + (b - a) * (static_cast<double>(s) / steps);
    LatticeIndex idx{static_cast<int>(std::lround(p.x() / h)), static_cast<int>(std::lround(p.y() / h))};
    if (!out.empty()) {
      const LatticeIndex& last = out.back();
      if (last == idx) continue;
      if (last.i != idx.i && last.j != idx.j) {
        LatticeIndex c1{idx.i, last.j};
        LatticeIndex c2{last.i, idx.j};
        out.push_back(dist_to_line(c1) <= dist_to_line(c2) ? c1 : c2);
      }
    }
    out.push_back(idx);
  }
  return out;
}

// Trims a lattice walk to the stretch that leaves boundary component
// `start_label` for the last time and first reaches `end_label` afterwards.
SlitPath trim_walk(const GridDomain& grid, const std::vector<LatticeIndex>& walk, int start_label, int end_label) {
  std::vector<int> ids;
  ids.reserve(walk.size());
  for (const LatticeIndex& p : walk) ids.push_back(grid.vertex_at(p));

  // first vertex of the end component
  std::size_t end = ids.size();
  std::size_t last_start = ids.size();
  for (std::size_t k = 0; k < ids.size(); ++k) {
    if (ids[k] < 0) continue;
    int label = grid.boundary_label(ids[k]);
    if (label == start_label) last_start = k;
    if (label == end_label && last_start != ids.size()) {
      end = k;
      break;
    }
  }
  if (last_start == ids.size() || end == ids.size())
    throw Error(ErrorCode::BadSlit, "walk does not connect the two boundary components");
  SlitPath slit;
  for (std::size_t k = last_start; k <= end; ++k) {
    if (ids[k] < 0) throw Error(ErrorCode::BadSlit, "walk leaves the domain");
    slit.vertices.push_back(ids[k]);
  }
  slit.from_label = start_label;
  slit.to_label = end_label;
  validate_slit(grid, slit);
  return slit;
}

}  // namespace

SlitPath radial_slit(const GridDomain& grid, const Vec2& center, double angle, int inner_label) {
  if (inner_label < 1 || inner_label > grid.num_holes())
    throw Error(ErrorCode::NoSuchHole, "no hole " + std::to_string(inner_label));
  // long enough to leave the bounding box
  LatticeIndex lo = grid.box_lo();
  LatticeIndex hi = grid.box_hi();
  const double reach = grid.spacing() * (std::abs(hi.i - lo.i) + std::abs(hi.j - lo.j) + 4);
  Vec2 end = center + reach * Vec2(std::cos(angle), std::sin(angle));
  return trim_walk(grid, digital_segment(grid.spacing(), center, end), inner_label, 0);
}

SlitPath shortest_slit(const GridDomain& grid, int outer_vertex, int inner_label) {
  if (inner_label < 1 || inner_label > grid.num_holes())
    throw Error(ErrorCode::NoSuchHole, "no hole " + std::to_string(inner_label));
  if (outer_vertex < 0 || outer_vertex >= grid.num_vertices() || grid.boundary_label(outer_vertex) != 0)
    throw Error(ErrorCode::BadSlit, "start vertex is not on the outer boundary");
  const Vec2 a = grid.position(outer_vertex);
  int target = -1;
  double best = std::numeric_limits<double>::infinity();
  for (int v = 0; v < grid.num_vertices(); ++v) {
    if (grid.boundary_label(v) != inner_label) continue;
    double d = (grid.position(v) - a).squaredNorm();
    if (d < best) {
      best = d;
      target = v;
    }
  }
  // overshoot into the hole so the trimmed walk ends on its last ring
  Vec2 b = grid.position(target);
  Vec2 beyond = b + (b - a).normalized() * 2.0 * grid.spacing();
  return trim_walk(grid, digital_segment(grid.spacing(), a, beyond), 0, inner_label);
}

PotentialField zero_potential(int num_vertices) { return PotentialField{Eigen::VectorXd::Zero(num_vertices)}; }

PotentialField radial_well(const GridDomain& grid, const Vec2& center, double r0, double width, double depth) {
  PotentialField V{Eigen::VectorXd(grid.num_vertices())};
  for (int v = 0; v < grid.num_vertices(); ++v) {
    double r = (grid.position(v) - center).norm();
    V.values[v] = depth * std::exp(-std::pow((r - r0) / width, 2));
  }
  return V;
}

PotentialField gaussian_bump(const GridDomain& grid, const Vec2& at, double width, double height) {
  PotentialField V{Eigen::VectorXd(grid.num_vertices())};
  for (int v = 0; v < grid.num_vertices(); ++v)
    V.values[v] = height * std::exp(-(grid.position(v) - at).squaredNorm() / (width * width));
  return V;
}

PotentialField potential_from_table(const GridDomain& grid, std::span<const Eigen::Vector3d> table) {
  if (table.empty()) throw Error(ErrorCode::InvalidArgument, "empty potential table");
  PotentialField V{Eigen::VectorXd(grid.num_vertices())};
  for (int v = 0; v < grid.num_vertices(); ++v) {
    Vec2 p = grid.position(v);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& row : table) {
      double d = (row.head<2>() - p).squaredNorm();
      if (d < best) {
        best = d;
        V.values[v] = row[2];
      }
    }
  }
  return V;
}

PotentialField circle_cosine(int n, double epsilon) {
  PotentialField V{Eigen::VectorXd(n)};
  for (int j = 0; j < n; ++j) V.values[j] = epsilon * std::cos(2.0 * std::numbers::pi * j / n);
  return V;
}

}  // namespace fluxlab
