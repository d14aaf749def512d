#pragma once

#include "fluxlab/geometry.hpp"

#include <Eigen/Core>

#include <ostream>
#include <span>

namespace fluxlab {

/// Circulations around the holes, in units of the flux quantum.
struct FluxVector {
  Eigen::VectorXd values;

  FluxVector() = default;
  explicit FluxVector(Eigen::VectorXd v) : values(std::move(v)) {}
  FluxVector(std::initializer_list<double> v) : values(static_cast<Eigen::Index>(v.size())) {
    Eigen::Index k = 0;
    for (double x : v) values[k++] = x;
  }
  Eigen::Index size() const { return values.size(); }
  double operator[](Eigen::Index i) const { return values[i]; }
};

/// Discrete vector potential: one phase per undirected edge, measured along
/// the edge's canonical orientation. Traversing an edge backwards picks up the
/// negated phase, so antisymmetry holds exactly.
struct LinkField {
  Eigen::VectorXd phase;

  double along(const DirectedEdge& e) const { return e.sign * phase[e.edge]; }
  Eigen::Index size() const { return phase.size(); }
};

/// Single-valued vertex phase used as a gauge function.
struct VertexPhase {
  Eigen::VectorXd values;
};

/// Line integrals of the canonical zero-field potential
///   A(x, y) = sum_i Phi_i / (2 pi |x - c_i|^2) (-(y - y_i), x - x_i)
/// along every edge: Phi_i times the wrapped angle the edge subtends at c_i.
LinkField aharonov_potential(const GridDomain& grid, const FluxVector& flux);

/// Sum of loop phases over 2 pi.
double circulation(const LinkField& field, const LatticeLoop& loop);

/// theta'(e) = theta(e) + chi(head) - chi(tail).
LinkField gauge_transform(const Graph& graph, const LinkField& field, const VertexPhase& chi);

/// Adds the canonical potential with integer circulations l to the field,
/// shifting every hole circulation by l_i.
LinkField integer_flux_shift(const GridDomain& grid, const LinkField& field, std::span<const int> shift);

/// Oriented phase sum around each full cell; zero for a flat field.
Eigen::VectorXd plaquette_sums(const GridDomain& grid, const LinkField& field);

/// Vertex potential whose increments match `edge_phase` along the edges of a
/// breadth-first spanning forest. Each component is rooted at its smallest
/// vertex id and edges are visited in id order, so the result is
/// deterministic.
struct TreeIntegral {
  Eigen::VectorXd potential;
  std::vector<char> tree_edge;
  std::vector<int> component;  // component id per vertex
  int num_components = 0;
};
TreeIntegral integrate_along_tree(const Graph& graph, const Eigen::VectorXd& edge_phase);

/// Plain-text "edge tail head phase" listing.
void write_link_field(std::ostream& os, const Graph& graph, const LinkField& field);

}  // namespace fluxlab
