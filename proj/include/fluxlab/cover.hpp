#pragma once

#include "fluxlab/gauge.hpp"
#include "fluxlab/geometry.hpp"
#include "fluxlab/operator.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace fluxlab {

/// Twofold cover of a graph whose cycles all carry integer or half-integer
/// circulation. Cover vertex (v, s) has index v + s N. Base edge e lifts to
/// the two cover edges e + s E joining (tail, s) to (head, s ^ cut[e]).
struct CoverGraph {
  int base_vertices = 0;
  int base_edges = 0;
  Graph graph;
  std::vector<char> cut;
  /// Base link phases copied onto both lifts of every edge.
  LinkField lifted;
  bool connected = false;

  int lift(int v, int sheet) const { return v + sheet * base_vertices; }
  int project(int x) const { return x % base_vertices; }
  int sheet(int x) const { return x / base_vertices; }
  /// Sheet swap.
  int deck(int x) const { return x < base_vertices ? x + base_vertices : x - base_vertices; }
};

/// Cuts come from a breadth-first spanning tree of the base graph: tree edges
/// never cut, and a non-tree edge cuts exactly when its fundamental cycle has
/// circulation in 1/2 + Z. Throws NonHalfIntegerFlux when some fundamental
/// cycle is neither integer nor half-integer within `tol`.
CoverGraph build_cover(const Graph& base, const LinkField& field, double tol = 1e-9);

/// Circulation (in flux quanta) of the fundamental cycle closed by each
/// non-tree edge; zero on tree edges.
Eigen::VectorXd fundamental_circulations(const Graph& base, const LinkField& field);

/// Odd when the closed base walk crosses an odd number of cuts.
int cut_parity(const CoverGraph& cover, std::span<const DirectedEdge> walk);

/// Multivalued phase on the cover with increments matching the lifted link
/// phases; e^{i theta} is single valued and flips sign under the deck map.
struct ThetaField {
  Eigen::VectorXd values;
  /// max over cover edges of the distance of the phase mismatch to 2 pi Z
  double holonomy_defect = 0.0;
  /// max_x |e^{i theta(Gx)} + e^{i theta(x)}|
  double antisymmetry_defect = 0.0;
};

ThetaField build_theta(const CoverGraph& cover);

/// (L u)(v, s) = e^{-i theta(v, s)} u(v) / sqrt(2). With the lattice sign
/// convention H_vw = -e^{-i theta(v,w)} / h^2 this is the isometry that sends
/// magnetic eigenvectors to antisymmetric eigenvectors of the real lifted
/// operator.
Eigen::VectorXcd lift(const Eigen::VectorXcd& u, const ThetaField& theta, const CoverGraph& cover);

/// Non-magnetic Neumann operator on the cover with the potential lifted
/// symmetrically.
RealHamiltonian assemble_lifted(const CoverGraph& cover, const PotentialField& potential, double spacing);

/// Isometric embedding of base vectors as (anti)symmetric cover vectors:
/// columns (e_{(v,0)} -+ e_{(v,1)}) / sqrt(2).
Eigen::SparseMatrix<double> antisymmetric_basis(const CoverGraph& cover);
Eigen::SparseMatrix<double> symmetric_basis(const CoverGraph& cover);

/// Q^T H Q for the basis above.
Eigen::SparseMatrix<double> project_onto(const Eigen::SparseMatrix<double>& lifted,
                                         const Eigen::SparseMatrix<double>& basis);

/// Antilinear involution K u = e^{i psi} conj(u), where psi integrates twice
/// the link phases along a spanning tree. It commutes with the half-flux
/// Hamiltonian.
struct KOperator {
  Eigen::VectorXd psi;
  Eigen::VectorXcd phase;

  Eigen::VectorXcd operator()(const Eigen::VectorXcd& u) const { return phase.cwiseProduct(u.conjugate()); }
};

KOperator k_operator(const Graph& graph, const LinkField& field, double tol = 1e-9);

/// Orthonormal K-fixed vectors spanning the same space as the columns of U.
/// Each candidate is u + K u, or i (u - K u) when the former vanishes.
Eigen::MatrixXcd real_representatives(const Eigen::MatrixXcd& U, const KOperator& K);

/// Real part of the lift after removing its global phase.
struct RealLift {
  Eigen::VectorXd values;
  /// ||Im(e^{-i a} L u)|| / ||L u|| for the chosen global phase a
  double imaginary_defect = 0.0;
};
RealLift real_lift(const Eigen::VectorXcd& u, const ThetaField& theta, const CoverGraph& cover);

}  // namespace fluxlab
