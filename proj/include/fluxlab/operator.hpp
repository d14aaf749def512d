#pragma once

#include "fluxlab/error.hpp"
#include "fluxlab/gauge.hpp"
#include "fluxlab/geometry.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <complex>
#include <ostream>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

namespace fluxlab {

using Complex = std::complex<double>;

enum class BoundaryCondition { Neumann, Dirichlet, SlitDirichlet };

struct PotentialField {
  Eigen::VectorXd values;
};

/// Sparse discrete Schroedinger operator on a graph, together with the map
/// between graph vertices and matrix rows. Vertices removed by a Dirichlet
/// condition have no row.
template <typename Scalar>
struct Hamiltonian {
  using Matrix = Eigen::SparseMatrix<Scalar>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Matrix matrix;
  std::vector<int> vertex_of_row;
  std::vector<int> row_of_vertex;
  BoundaryCondition bc = BoundaryCondition::Neumann;
  std::vector<int> removed_vertices;
  double spacing = 1.0;

  Eigen::Index dimension() const { return matrix.rows(); }

  /// Row vector extended by zeros on removed vertices.
  Vector to_vertices(const Vector& rows) const {
    Vector out = Vector::Zero(static_cast<Eigen::Index>(row_of_vertex.size()));
    for (std::size_t r = 0; r < vertex_of_row.size(); ++r) out[vertex_of_row[r]] = rows[r];
    return out;
  }
  Vector to_rows(const Vector& vertex_values) const {
    Vector out(dimension());
    for (std::size_t r = 0; r < vertex_of_row.size(); ++r) out[r] = vertex_values[vertex_of_row[r]];
    return out;
  }
};

using MagneticHamiltonian = Hamiltonian<Complex>;
using RealHamiltonian = Hamiltonian<double>;

/// Operator of the lattice quadratic form
///   Q(u) = sum_edges |u_tail - e^{i theta(head, tail)} u_head|^2 / h^2 + sum_v V_v |u_v|^2
/// restricted to functions vanishing on `removed` vertices. The entry between
/// neighbors v, w is -e^{-i theta(v, w)} / h^2 and the diagonal counts every
/// graph neighbor, removed or not, so Dirichlet rows keep their edges to the
/// zeroed vertices. A real scalar type requires `field == nullptr`.
template <typename Scalar>
Hamiltonian<Scalar> assemble_on_graph(const Graph& graph, const LinkField* field, const PotentialField& potential,
                                      double spacing, std::span<const char> removed, BoundaryCondition bc) {
  const int n = graph.num_vertices;
  if (potential.values.size() != n)
    throw Error(ErrorCode::InconsistentSizes, "potential has " + std::to_string(potential.values.size()) +
                                                  " values for " + std::to_string(n) + " vertices");
  if (field && field->size() != static_cast<Eigen::Index>(graph.edges.size()))
    throw Error(ErrorCode::InconsistentSizes, "link field does not match the edge set");
  if (!removed.empty() && static_cast<int>(removed.size()) != n)
    throw Error(ErrorCode::InconsistentSizes, "removal mask does not match the vertex set");
  if constexpr (!std::is_same_v<Scalar, Complex>) {
    if (field) throw Error(ErrorCode::InvalidArgument, "a real operator cannot carry link phases");
  }
  if (!potential.values.allFinite()) throw Error(ErrorCode::InvalidArgument, "potential has non-finite values");

  Hamiltonian<Scalar> H;
  H.bc = bc;
  H.spacing = spacing;
  H.row_of_vertex.assign(n, -1);
  for (int v = 0; v < n; ++v) {
    if (!removed.empty() && removed[v]) {
      H.removed_vertices.push_back(v);
      continue;
    }
    H.row_of_vertex[v] = static_cast<int>(H.vertex_of_row.size());
    H.vertex_of_row.push_back(v);
  }
  const int rows = static_cast<int>(H.vertex_of_row.size());
  const double inv_h2 = 1.0 / (spacing * spacing);

  std::vector<Eigen::Triplet<Scalar>> triplets;
  triplets.reserve(static_cast<std::size_t>(rows) + 2 * graph.edges.size());
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  for (int v = 0; v < n; ++v) diag[v] = potential.values[v];
  for (std::size_t e = 0; e < graph.edges.size(); ++e) {
    const int t = graph.edges[e].tail;
    const int h = graph.edges[e].head;
    diag[t] += inv_h2;
    diag[h] += inv_h2;
    const int rt = H.row_of_vertex[t];
    const int rh = H.row_of_vertex[h];
    if (rt < 0 || rh < 0) continue;
    Scalar hop;
    if constexpr (std::is_same_v<Scalar, Complex>) {
      const double theta = field ? field->phase[e] : 0.0;
      hop = -inv_h2 * Complex(std::cos(theta), -std::sin(theta));  // -e^{-i theta(t, h)} / h^2
    } else {
      hop = -inv_h2;
    }
    triplets.emplace_back(rt, rh, hop);
    if constexpr (std::is_same_v<Scalar, Complex>)
      triplets.emplace_back(rh, rt, std::conj(hop));
    else
      triplets.emplace_back(rh, rt, hop);
  }
  for (int r = 0; r < rows; ++r) triplets.emplace_back(r, r, Scalar(diag[H.vertex_of_row[r]]));
  H.matrix.resize(rows, rows);
  H.matrix.setFromTriplets(triplets.begin(), triplets.end());
  H.matrix.makeCompressed();
  return H;
}

/// Lattice path of vertices joining two distinct boundary components.
struct SlitPath {
  std::vector<int> vertices;
  int from_label = -1;
  int to_label = -1;
};

/// Neumann keeps every active vertex; Dirichlet removes all boundary vertices.
MagneticHamiltonian assemble_magnetic(const GridDomain& grid, const LinkField& field, const PotentialField& potential,
                                      BoundaryCondition bc = BoundaryCondition::Neumann);
/// Neumann operator with the slit vertices removed.
MagneticHamiltonian assemble_slit(const GridDomain& grid, const LinkField& field, const PotentialField& potential,
                                  const SlitPath& slit);

/// Cycle graph with n vertices at angles 2 pi j / n, edge j -> j+1 (mod n).
Graph circle_graph(int n);
/// Constant link phase alpha * 2 pi / n on every forward edge.
LinkField circle_field(int n, double alpha);
/// Discretization of -(d/dphi - i alpha)^2 + V on the unit circle.
MagneticHamiltonian assemble_circle(int n, double alpha);
MagneticHamiltonian assemble_circle(int n, double alpha, const PotentialField& potential);

/// BadSlit unless the path is 4-connected, joins boundary vertices of two
/// different components, and has no boundary vertices in its interior.
void validate_slit(const GridDomain& grid, const SlitPath& slit);

/// Digital straight slit along the ray from `center` at `angle`, trimmed to
/// run from the last vertex of boundary component `inner_label` to the first
/// vertex of the outer boundary.
SlitPath radial_slit(const GridDomain& grid, const Vec2& center, double angle, int inner_label = 1);
/// Digital straight slit from the outer boundary vertex `outer_vertex` to the
/// nearest vertex of boundary component `inner_label`.
SlitPath shortest_slit(const GridDomain& grid, int outer_vertex, int inner_label = 1);

PotentialField zero_potential(int num_vertices);
/// depth * exp(-((r - r0) / width)^2) with r measured from `center`.
PotentialField radial_well(const GridDomain& grid, const Vec2& center, double r0, double width, double depth);
/// height * exp(-|x - at|^2 / width^2).
PotentialField gaussian_bump(const GridDomain& grid, const Vec2& at, double width, double height);
/// Value of the nearest sample in a table of (x, y, value) rows.
PotentialField potential_from_table(const GridDomain& grid, std::span<const Eigen::Vector3d> table);
/// epsilon * cos(phi_j) on the discretized circle.
PotentialField circle_cosine(int n, double epsilon);

/// max |H - H^*| / max |H|.
template <typename Scalar>
double hermiticity_defect(const Eigen::SparseMatrix<Scalar>& m) {
  Eigen::SparseMatrix<Scalar> diff = m - Eigen::SparseMatrix<Scalar>(m.adjoint());
  double largest = 0.0;
  double defect = 0.0;
  for (int k = 0; k < m.outerSize(); ++k)
    for (typename Eigen::SparseMatrix<Scalar>::InnerIterator it(m, k); it; ++it)
      largest = std::max(largest, std::abs(it.value()));
  for (int k = 0; k < diff.outerSize(); ++k)
    for (typename Eigen::SparseMatrix<Scalar>::InnerIterator it(diff, k); it; ++it)
      defect = std::max(defect, std::abs(it.value()));
  return largest > 0.0 ? defect / largest : defect;
}

/// Coordinate listing "row col re im", one nonzero per line.
template <typename Scalar>
void write_matrix(std::ostream& os, const Eigen::SparseMatrix<Scalar>& m) {
  os.precision(17);
  for (int k = 0; k < m.outerSize(); ++k)
    for (typename Eigen::SparseMatrix<Scalar>::InnerIterator it(m, k); it; ++it)
      os << it.row() << ' ' << it.col() << ' ' << std::real(it.value()) << ' ' << std::imag(it.value()) << '\n';
}

}  // namespace fluxlab
