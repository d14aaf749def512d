#include "fluxlab/gauge.hpp"

#include "fluxlab/error.hpp"

#include <deque>
#include <numbers>

namespace fluxlab {

LinkField aharonov_potential(const GridDomain& grid, const FluxVector& flux) {
  if (flux.size() != grid.num_holes())
    throw Error(ErrorCode::LengthMismatch, "flux vector has " + std::to_string(flux.size()) +
                                               " entries for a domain with " + std::to_string(grid.num_holes()) +
                                               " holes");
  LinkField field{Eigen::VectorXd::Zero(grid.num_edges())};
  for (int e = 0; e < grid.num_edges(); ++e) {
    const Edge& edge = grid.edges()[e];
    Vec2 a = grid.position(edge.tail);
    Vec2 b = grid.position(edge.head);
    double theta = 0.0;
    for (int i = 0; i < grid.num_holes(); ++i) {
      if (flux[i] == 0.0) continue;
      // line integral of a vortex of circulation 2 pi Phi_i over a straight
      // segment: Phi_i times the angle it subtends at the vortex
      theta += flux[i] * angle_increment(a, b, grid.hole_refs()[i]);
    }
    field.phase[e] = theta;
  }
  return field;
}

double circulation(const LinkField& field, const LatticeLoop& loop) {
  double total = 0.0;
  for (const DirectedEdge& de : loop.edges) {
    if (de.edge < 0 || de.edge >= field.size())
      throw Error(ErrorCode::MissingEdge, "loop edge " + std::to_string(de.edge) + " has no phase");
    total += field.along(de);
  }
  return total / (2.0 * std::numbers::pi);
}

LinkField gauge_transform(const Graph& graph, const LinkField& field, const VertexPhase& chi) {
  if (chi.values.size() != graph.num_vertices || field.size() != static_cast<Eigen::Index>(graph.edges.size()))
    throw Error(ErrorCode::InconsistentSizes, "gauge function does not match the graph");
  LinkField out = field;
  for (std::size_t e = 0; e < graph.edges.size(); ++e)
    out.phase[e] += chi.values[graph.edges[e].head] - chi.values[graph.edges[e].tail];
  return out;
}

LinkField integer_flux_shift(const GridDomain& grid, const LinkField& field, std::span<const int> shift) {
  if (static_cast<int>(shift.size()) != grid.num_holes())
    throw Error(ErrorCode::LengthMismatch, "shift has " + std::to_string(shift.size()) + " entries for " +
                                               std::to_string(grid.num_holes()) + " holes");
  Eigen::VectorXd l(grid.num_holes());
  for (int i = 0; i < grid.num_holes(); ++i) l[i] = shift[i];
  LinkField out = field;
  out.phase += aharonov_potential(grid, FluxVector(l)).phase;
  return out;
}

Eigen::VectorXd plaquette_sums(const GridDomain& grid, const LinkField& field) {
  Eigen::VectorXd sums(grid.num_cells());
  for (int c = 0; c < grid.num_cells(); ++c) {
    auto corners = grid.cell_corners(c);
    double s = 0.0;
    for (int k = 0; k < 4; ++k) s += field.along(*grid.edge_between(corners[k], corners[(k + 1) % 4]));
    sums[c] = s;
  }
  return sums;
}

TreeIntegral integrate_along_tree(const Graph& graph, const Eigen::VectorXd& edge_phase) {
  TreeIntegral out;
  const int n = graph.num_vertices;
  out.potential = Eigen::VectorXd::Zero(n);
  out.tree_edge.assign(graph.edges.size(), 0);
  out.component.assign(n, -1);
  for (int root = 0; root < n; ++root) {
    if (out.component[root] >= 0) continue;
    const int id = out.num_components++;
    out.component[root] = id;
    std::deque<int> queue{root};
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop_front();
      for (int e : graph.incident[v]) {
        int w = graph.other_end(e, v);
        if (out.component[w] >= 0) continue;
        out.component[w] = id;
        out.tree_edge[e] = 1;
        double step = graph.edges[e].tail == v ? edge_phase[e] : -edge_phase[e];
        out.potential[w] = out.potential[v] + step;
        queue.push_back(w);
      }
    }
  }
  return out;
}

void write_link_field(std::ostream& os, const Graph& graph, const LinkField& field) {
  os.precision(17);
  for (std::size_t e = 0; e < graph.edges.size(); ++e)
    os << e << ' ' << graph.edges[e].tail << ' ' << graph.edges[e].head << ' ' << field.phase[e] << '\n';
}

}  // namespace fluxlab
