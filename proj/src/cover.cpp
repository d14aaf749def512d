#include "fluxlab/cover.hpp"

#include "fluxlab/error.hpp"

#include <cmath>
#include <deque>
#include <numbers>

namespace fluxlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Distance of x to the nearest integer.
double off_integer(double x) { return std::abs(x - std::round(x)); }

}  // namespace

Eigen::VectorXd fundamental_circulations(const Graph& base, const LinkField& field) {
  if (field.size() != static_cast<Eigen::Index>(base.edges.size()))
    throw Error(ErrorCode::InconsistentSizes, "link field does not match the graph");
  TreeIntegral tree = integrate_along_tree(base, field.phase);
  Eigen::VectorXd circ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(base.edges.size()));
  for (std::size_t e = 0; e < base.edges.size(); ++e) {
    if (tree.tree_edge[e]) continue;
    const Edge& edge = base.edges[e];
    circ[e] = (tree.potential[edge.tail] + field.phase[e] - tree.potential[edge.head]) / kTwoPi;
  }
  return circ;
}

CoverGraph build_cover(const Graph& base, const LinkField& field, double tol) {
  Eigen::VectorXd circ = fundamental_circulations(base, field);
  CoverGraph cover;
  cover.base_vertices = base.num_vertices;
  cover.base_edges = static_cast<int>(base.edges.size());
  cover.cut.assign(base.edges.size(), 0);
  for (std::size_t e = 0; e < base.edges.size(); ++e) {
    const double twice = 2.0 * circ[e];
    if (off_integer(twice) > 2.0 * tol)
      throw Error(ErrorCode::NonHalfIntegerFlux,
                  "cycle through edge " + std::to_string(e) + " has circulation " + std::to_string(circ[e]));
    cover.cut[e] = static_cast<long long>(std::llround(twice)) % 2 != 0;
  }

  const int N = base.num_vertices;
  const int E = cover.base_edges;
  cover.graph.num_vertices = 2 * N;
  cover.graph.edges.resize(2 * static_cast<std::size_t>(E));
  cover.lifted.phase.resize(2 * E);
  for (int s = 0; s < 2; ++s)
    for (int e = 0; e < E; ++e) {
      const Edge& edge = base.edges[e];
      cover.graph.edges[e + s * E] = {edge.tail + s * N, edge.head + (s ^ cover.cut[e]) * N};
      cover.lifted.phase[e + s * E] = field.phase[e];
    }
  cover.graph.finalize();

  // The cover of a connected base graph is connected exactly when some cycle
  // carries half-integer circulation.
  TreeIntegral reach = integrate_along_tree(cover.graph, Eigen::VectorXd::Zero(2 * E));
  cover.connected = reach.num_components == 1;
  return cover;
}

int cut_parity(const CoverGraph& cover, std::span<const DirectedEdge> walk) {
  int parity = 0;
  for (const DirectedEdge& de : walk) parity ^= cover.cut[de.edge];
  return parity;
}

ThetaField build_theta(const CoverGraph& cover) {
  if (!cover.connected)
    throw Error(ErrorCode::CoverNotConnected, "integer circulations give two disjoint sheets");
  TreeIntegral tree = integrate_along_tree(cover.graph, cover.lifted.phase);
  ThetaField theta;
  theta.values = tree.potential;
  for (std::size_t e = 0; e < cover.graph.edges.size(); ++e) {
    const Edge& edge = cover.graph.edges[e];
    const double mismatch = theta.values[edge.head] - theta.values[edge.tail] - cover.lifted.phase[e];
    theta.holonomy_defect = std::max(theta.holonomy_defect, kTwoPi * off_integer(mismatch / kTwoPi));
  }
  if (theta.holonomy_defect > 1e-10)
    throw Error(ErrorCode::InconsistentHolonomy,
                "phase mismatch " + std::to_string(theta.holonomy_defect) + " on a cover cycle");
  for (int x = 0; x < cover.graph.num_vertices; ++x) {
    const double d = std::abs(std::polar(1.0, theta.values[cover.deck(x)]) + std::polar(1.0, theta.values[x]));
    theta.antisymmetry_defect = std::max(theta.antisymmetry_defect, d);
  }
  return theta;
}

Eigen::VectorXcd lift(const Eigen::VectorXcd& u, const ThetaField& theta, const CoverGraph& cover) {
  if (u.size() != cover.base_vertices) throw Error(ErrorCode::InconsistentSizes, "vector does not match the base");
  Eigen::VectorXcd out(2 * cover.base_vertices);
  const double scale = 1.0 / std::sqrt(2.0);
  for (int x = 0; x < 2 * cover.base_vertices; ++x)
    out[x] = std::polar(scale, -theta.values[x]) * u[cover.project(x)];
  return out;
}

RealHamiltonian assemble_lifted(const CoverGraph& cover, const PotentialField& potential, double spacing) {
  if (potential.values.size() != cover.base_vertices)
    throw Error(ErrorCode::InconsistentSizes, "potential does not match the base");
  PotentialField lifted{Eigen::VectorXd(2 * cover.base_vertices)};
  lifted.values << potential.values, potential.values;
  return assemble_on_graph<double>(cover.graph, nullptr, lifted, spacing, {}, BoundaryCondition::Neumann);
}

namespace {

Eigen::SparseMatrix<double> sheet_basis(const CoverGraph& cover, double second_sheet_sign) {
  const int N = cover.base_vertices;
  const double s = 1.0 / std::sqrt(2.0);
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(2 * static_cast<std::size_t>(N));
  for (int v = 0; v < N; ++v) {
    t.emplace_back(cover.lift(v, 0), v, s);
    t.emplace_back(cover.lift(v, 1), v, second_sheet_sign * s);
  }
  Eigen::SparseMatrix<double> Q(2 * N, N);
  Q.setFromTriplets(t.begin(), t.end());
  return Q;
}

}  // namespace

Eigen::SparseMatrix<double> antisymmetric_basis(const CoverGraph& cover) { return sheet_basis(cover, -1.0); }
Eigen::SparseMatrix<double> symmetric_basis(const CoverGraph& cover) { return sheet_basis(cover, +1.0); }

Eigen::SparseMatrix<double> project_onto(const Eigen::SparseMatrix<double>& lifted,
                                         const Eigen::SparseMatrix<double>& basis) {
  Eigen::SparseMatrix<double> out = basis.transpose() * lifted * basis;
  out.prune(0.0);
  out.makeCompressed();
  return out;
}

KOperator k_operator(const Graph& graph, const LinkField& field, double tol) {
  if (field.size() != static_cast<Eigen::Index>(graph.edges.size()))
    throw Error(ErrorCode::InconsistentSizes, "link field does not match the graph");
  Eigen::VectorXd doubled = 2.0 * field.phase;
  TreeIntegral tree = integrate_along_tree(graph, doubled);
  for (std::size_t e = 0; e < graph.edges.size(); ++e) {
    if (tree.tree_edge[e]) continue;
    const Edge& edge = graph.edges[e];
    const double turns = (tree.potential[edge.tail] + doubled[e] - tree.potential[edge.head]) / kTwoPi;
    if (off_integer(turns) > 2.0 * tol)
      throw Error(ErrorCode::NonHalfIntegerFlux, "twice the circulation through edge " + std::to_string(e) +
                                                     " is " + std::to_string(turns) + ", not an integer");
  }
  KOperator K;
  K.psi = tree.potential;
  K.phase.resize(graph.num_vertices);
  for (int v = 0; v < graph.num_vertices; ++v) K.phase[v] = std::polar(1.0, K.psi[v]);
  return K;
}

Eigen::MatrixXcd real_representatives(const Eigen::MatrixXcd& U, const KOperator& K) {
  const Eigen::Index d = U.cols();
  const Eigen::Index n = U.rows();
  if (n != K.phase.size()) throw Error(ErrorCode::InconsistentSizes, "basis does not match the operator K");
  Eigen::MatrixXcd out(n, d);
  Eigen::Index found = 0;
  // `reference` is the norm of the basis vector the candidate came from
  auto accept = [&](Eigen::VectorXcd w, double reference) {
    if (found == d) return;
    // K-fixed vectors have real mutual inner products, so real coefficients
    // keep the projection K-fixed.
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index c = 0; c < found; ++c) w -= out.col(c).dot(w).real() * out.col(c);
    const double after = w.norm();
    if (after > 1e-6 * reference) out.col(found++) = w / after;
  };
  for (Eigen::Index c = 0; c < d && found < d; ++c) {
    Eigen::VectorXcd u = U.col(c);
    Eigen::VectorXcd Ku = K(u);
    accept(u + Ku, u.norm());
    accept(Complex(0.0, 1.0) * (u - Ku), u.norm());
  }
  if (found < d)
    throw Error(ErrorCode::DegenerateProjection,
                "only " + std::to_string(found) + " of " + std::to_string(d) + " K-fixed directions recovered");
  return out;
}

RealLift real_lift(const Eigen::VectorXcd& u, const ThetaField& theta, const CoverGraph& cover) {
  Eigen::VectorXcd f = lift(u, theta, cover);
  // global phase a maximizing ||Re(e^{-ia} f)||: half the argument of sum f^2
  Complex sq = f.array().square().sum();
  Complex rotate = std::polar(1.0, -0.5 * std::arg(sq));
  f *= rotate;
  RealLift out;
  out.values = f.real();
  const double total = f.norm();
  out.imaginary_defect = total > 0 ? f.imag().norm() / total : 0.0;
  return out;
}

}  // namespace fluxlab
