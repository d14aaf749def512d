#include "support.hpp"

#include "fluxlab/cover.hpp"
#include "fluxlab/eigensolver.hpp"

#include <numbers>
#include <random>
#include <set>

using namespace fluxlab;
using testing::annulus;
using testing::code_of;
using testing::dense_eigenvalues;
using testing::two_holes;

namespace {

Eigen::VectorXcd random_vector(Eigen::Index n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  Eigen::VectorXcd x(n);
  for (auto& c : x) c = Complex(z(rng), z(rng));
  return x;
}

Eigen::MatrixXcd projector(const Eigen::MatrixXcd& U) {
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(U);
  Eigen::MatrixXcd Q = qr.householderQ() * Eigen::MatrixXcd::Identity(U.rows(), U.cols());
  return Q * Q.adjoint();
}

}  // namespace

TEST_CASE("cut parity: odd around a half-flux hole, even around plaquettes") {
  GridDomain g = build_grid(annulus(0.05));
  CoverGraph c = build_cover(g.graph(), aharonov_potential(g, {0.5}));
  CHECK(c.connected);
  LatticeLoop loop = hole_loop(g, 1);
  CHECK(cut_parity(c, loop.edges) == 1);
  for (int cell = 0; cell < g.num_cells(); cell += 7) {
    auto k = g.cell_corners(cell);
    std::vector<DirectedEdge> walk;
    for (int s = 0; s < 4; ++s) walk.push_back(*g.edge_between(k[s], k[(s + 1) % 4]));
    CHECK(cut_parity(c, walk) == 0);
  }
  // the hole loop lifts to a path ending at the deck image of its start
  int x = c.lift(loop.vertices[0], 0);
  for (const DirectedEdge& de : loop.edges) {
    const Edge& e = g.edges()[de.edge];
    x = c.lift(de.sign > 0 ? e.head : e.tail, c.sheet(x) ^ c.cut[de.edge]);
  }
  CHECK(x == c.deck(c.lift(loop.vertices[0], 0)));
}

TEST_CASE("deck map is a fixed-point-free involution commuting with adjacency") {
  GridDomain g = build_grid(annulus(0.1));
  CoverGraph c = build_cover(g.graph(), aharonov_potential(g, {0.5}));
  std::set<std::pair<int, int>> adj;
  for (const Edge& e : c.graph.edges) adj.insert(std::minmax(e.tail, e.head));
  for (int x = 0; x < c.graph.num_vertices; ++x) {
    CHECK(c.deck(x) != x);
    CHECK(c.deck(c.deck(x)) == x);
  }
  for (const Edge& e : c.graph.edges) CHECK(adj.count(std::minmax(c.deck(e.tail), c.deck(e.head))) == 1);
}

TEST_CASE("two half-flux holes: a loop around both lifts closed") {
  GridDomain g = build_grid(two_holes(0.02));
  CoverGraph c = build_cover(g.graph(), aharonov_potential(g, {0.5, 0.5}));
  CHECK(c.connected);
  CHECK(cut_parity(c, hole_loop(g, 1).edges) == 1);
  CHECK(cut_parity(c, hole_loop(g, 2).edges) == 1);
  CHECK(cut_parity(c, testing::rectangle_loop(g, 35, 5, 125, 45).edges) == 0);
  // one half-integer hole suffices for connectivity
  CoverGraph mixed = build_cover(g.graph(), aharonov_potential(g, {0.5, 1.0}));
  CHECK(mixed.connected);
  CHECK(cut_parity(mixed, hole_loop(g, 2).edges) == 0);
}

TEST_CASE("integer flux gives the trivial two-sheet cover") {
  GridDomain g = build_grid(annulus(0.1));
  CoverGraph c = build_cover(g.graph(), aharonov_potential(g, {0.0}));
  CHECK_FALSE(c.connected);
  CHECK(std::none_of(c.cut.begin(), c.cut.end(), [](char b) { return b != 0; }));
  CHECK(code_of([&] { build_theta(c); }) == ErrorCode::CoverNotConnected);
  // lifted operator is two copies of the base Laplacian
  RealHamiltonian L = assemble_lifted(c, zero_potential(g.num_vertices()), g.spacing());
  RealHamiltonian base = assemble_on_graph<double>(g.graph(), nullptr, zero_potential(g.num_vertices()), g.spacing(),
                                                   {}, BoundaryCondition::Neumann);
  const int N = g.num_vertices();
  Eigen::MatrixXd dense = Eigen::MatrixXd(L.matrix);
  Eigen::MatrixXd b = Eigen::MatrixXd(base.matrix);
  CHECK((dense.topLeftCorner(N, N) - b).norm() == 0.0);
  CHECK((dense.bottomRightCorner(N, N) - b).norm() == 0.0);
  CHECK(dense.topRightCorner(N, N).norm() == 0.0);
}

TEST_CASE("fractional flux is rejected") {
  GridDomain g = build_grid(annulus(0.1));
  CHECK(code_of([&] { build_cover(g.graph(), aharonov_potential(g, {0.3})); }) == ErrorCode::NonHalfIntegerFlux);
  CHECK(code_of([&] { k_operator(g.graph(), aharonov_potential(g, {0.3})); }) == ErrorCode::NonHalfIntegerFlux);
}

TEST_CASE("8-point circle at half flux: theta advances pi/8 per step around the 16-cycle") {
  CoverGraph c = build_cover(circle_graph(8), circle_field(8, 0.5));
  REQUIRE(c.connected);
  ThetaField t = build_theta(c);
  CHECK(t.holonomy_defect <= 1e-10);
  CHECK(t.antisymmetry_defect <= 1e-10);
  // walk forward from (0, 0) along the cover
  int x = c.lift(0, 0);
  const Complex start = std::polar(1.0, t.values[x]);
  for (int p = 1; p <= 16; ++p) {
    const int e = c.project(x) + c.sheet(x) * c.base_edges;
    x = c.graph.edges[e].head;
    const Complex expected = start * std::polar(1.0, std::numbers::pi * p / 8);
    CHECK(std::abs(std::polar(1.0, t.values[x]) - expected) <= 1e-12);
    if (p == 8) CHECK(x == c.deck(c.lift(0, 0)));
  }
  CHECK(x == c.lift(0, 0));
}

TEST_CASE("lift is an antisymmetric isometry") {
  GridDomain g = build_grid(annulus(0.05));
  CoverGraph c = build_cover(g.graph(), aharonov_potential(g, {0.5}));
  ThetaField t = build_theta(c);
  CHECK(t.holonomy_defect <= 1e-10);
  CHECK(t.antisymmetry_defect <= 1e-10);
  CHECK(lift(Eigen::VectorXcd::Zero(g.num_vertices()), t, c).norm() == 0.0);
  Eigen::VectorXcd u = random_vector(g.num_vertices(), 1);
  Eigen::VectorXcd Lu = lift(u, t, c);
  CHECK(Lu.norm() / u.norm() == doctest::Approx(1.0).epsilon(1e-12));
  double anti = 0.0;
  for (int x = 0; x < c.graph.num_vertices; ++x) anti = std::max(anti, std::abs(Lu[c.deck(x)] + Lu[x]));
  CHECK(anti <= 1e-10 * Lu.cwiseAbs().maxCoeff());
}

TEST_CASE("lifted eigenvectors: residual and block spectra") {
  GridDomain g = build_grid(annulus(0.1));
  LinkField f = aharonov_potential(g, {0.5});
  PotentialField V = radial_well(g, {0.1, 0.05}, 0.6, 0.2, 4.0);
  MagneticHamiltonian H = assemble_magnetic(g, f, V);
  CoverGraph c = build_cover(g.graph(), f);
  ThetaField t = build_theta(c);
  RealHamiltonian Ht = assemble_lifted(c, V, g.spacing());

  SolverOptions opt;
  EigenResult<Complex> r = lowest_eigenpairs(H.matrix, 3, opt);
  for (int i = 0; i < 3; ++i) {
    Eigen::VectorXcd Lu = lift(r.eigenvectors.col(i), t, c);
    const double res = (Ht.matrix.cast<Complex>() * Lu - r.eigenvalues[i] * Lu).norm();
    CHECK(res <= 10 * opt.tol * r.norm_estimate);
  }

  Eigen::VectorXd magnetic = dense_eigenvalues(H.matrix);
  Eigen::VectorXd anti = dense_eigenvalues(project_onto(Ht.matrix, antisymmetric_basis(c)));
  Eigen::VectorXd sym = dense_eigenvalues(project_onto(Ht.matrix, symmetric_basis(c)));
  Eigen::VectorXd zero_flux = dense_eigenvalues(assemble_magnetic(g, aharonov_potential(g, {0.0}), V).matrix);
  Eigen::VectorXd full = dense_eigenvalues(Ht.matrix);
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(anti[i] - magnetic[i]) <= 1e-8 * (1 + std::abs(magnetic[i])));
    CHECK(std::abs(sym[i] - zero_flux[i]) <= 1e-8 * (1 + std::abs(zero_flux[i])));
  }
  // the full lifted spectrum is the union of both blocks
  Eigen::VectorXd both(anti.size() + sym.size());
  both << anti, sym;
  std::sort(both.data(), both.data() + both.size());
  CHECK((both - full).cwiseAbs().maxCoeff() <= 1e-9 * full.cwiseAbs().maxCoeff());
}

TEST_CASE("K is an involution commuting with the half-flux operator") {
  GridDomain g = build_grid(two_holes(0.05));
  LinkField f = aharonov_potential(g, {0.5, 1.5});
  MagneticHamiltonian H = assemble_magnetic(g, f, zero_potential(g.num_vertices()));
  KOperator K = k_operator(g.graph(), f);
  const double norm = gershgorin_norm(H.matrix);
  for (unsigned s = 0; s < 20; ++s) {
    Eigen::VectorXcd u = random_vector(g.num_vertices(), s);
    CHECK((K(K(u)) - u).norm() <= 1e-12 * u.norm());
    CHECK((K(H.matrix * u) - H.matrix * K(u)).norm() <= 1e-10 * norm * u.norm());
  }
}

TEST_CASE("zero flux: K is plain conjugation") {
  GridDomain g = build_grid(annulus(0.1));
  KOperator K = k_operator(g.graph(), aharonov_potential(g, {0.0}));
  Eigen::VectorXcd u = random_vector(g.num_vertices(), 9).real().cast<Complex>();
  CHECK((K(u) - u).norm() == 0.0);
}

TEST_CASE("a simple ground state is a K eigenvector") {
  GridDomain g = build_grid({Disk{{0, 0}, 1}, {Disk{{0.3, 0.17}, 0.25}}, 0.05});
  LinkField f = aharonov_potential(g, {0.5});
  MagneticHamiltonian H = assemble_magnetic(g, f, zero_potential(g.num_vertices()));
  EigenResult<Complex> r = lowest_eigenpairs(H.matrix, 3);
  REQUIRE(multiplicity_estimate(r.eigenvalues, 1e-3) == 1);
  KOperator K = k_operator(g.graph(), f);
  Eigen::VectorXcd u = r.eigenvectors.col(0);
  Eigen::VectorXcd Ku = K(u);
  const Complex coeff = u.dot(Ku);
  CHECK(std::abs(coeff) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK((Ku - coeff * u).norm() <= 1e-8);
  Eigen::MatrixXcd rep = real_representatives(r.eigenvectors.leftCols(1), K);
  CHECK(std::abs(std::abs(rep.col(0).dot(u)) - 1.0) <= 1e-8);
}

TEST_CASE("half-flux circle pair: two K-fixed representatives with a constant phase") {
  const int n = 256;
  MagneticHamiltonian H = assemble_circle(n, 0.5);
  EigenResult<Complex> r = lowest_eigenpairs(H.matrix, 3);
  REQUIRE(multiplicity_estimate(r.eigenvalues, 1e-6) == 2);
  KOperator K = k_operator(circle_graph(n), circle_field(n, 0.5));
  const double half_step = std::numbers::pi / n;
  for (int v = 0; v < n; ++v) CHECK(std::abs(std::polar(1.0, K.psi[v]) - std::polar(1.0, 2 * half_step * v)) <= 1e-12);
  Eigen::MatrixXcd reps = real_representatives(r.eigenvectors.leftCols(2), K);
  CHECK((reps.adjoint() * reps - Eigen::Matrix2cd::Identity()).norm() <= 1e-10);
  for (int c = 0; c < 2; ++c) {
    CHECK((K(reps.col(c)) - reps.col(c)).norm() <= 1e-10);
    // psi = phi mod 2 pi, so e^{-i phi / 2} r is real: a fixed phase times a real profile
    Eigen::VectorXcd unwound = reps.col(c);
    for (int v = 0; v < n; ++v) unwound[v] *= std::polar(1.0, -half_step * v);
    CHECK(unwound.imag().norm() <= 1e-8);
  }
  // the real profiles are combinations of cos(phi/2) and sin(phi/2)
  Eigen::MatrixXd basis(n, 2);
  for (int v = 0; v < n; ++v) {
    const double phi = 2 * std::numbers::pi * v / n;
    basis(v, 0) = std::cos(phi / 2);
    basis(v, 1) = std::sin(phi / 2);
  }
  Eigen::MatrixXd P = projector(basis.cast<Complex>()).real();
  for (int c = 0; c < 2; ++c) {
    Eigen::VectorXd profile(n);
    for (int v = 0; v < n; ++v) profile[v] = (reps(v, c) * std::polar(1.0, -half_step * v)).real();
    CHECK((P * profile - profile).norm() <= 1e-6 * profile.norm());
  }
}

TEST_CASE("representatives of a rotated basis span the same space") {
  GridDomain g = build_grid(annulus(0.05));
  LinkField f = aharonov_potential(g, {0.5});
  MagneticHamiltonian H = assemble_magnetic(g, f, zero_potential(g.num_vertices()));
  EigenResult<Complex> r = lowest_eigenpairs(H.matrix, 3);
  REQUIRE(multiplicity_estimate(r.eigenvalues, 1e-3) == 2);
  KOperator K = k_operator(g.graph(), f);
  Eigen::MatrixXcd U = r.eigenvectors.leftCols(2);
  // random unitary 2 x 2
  Eigen::Matrix2cd M;
  M << Complex(0.3, 1.1), Complex(-0.7, 0.2), Complex(0.5, -0.4), Complex(1.3, 0.9);
  Eigen::Matrix2cd W = Eigen::HouseholderQR<Eigen::Matrix2cd>(M).householderQ();
  Eigen::MatrixXcd a = real_representatives(U, K);
  Eigen::MatrixXcd b = real_representatives(U * W, K);
  const Eigen::MatrixXcd Pa = a * a.adjoint();
  const Eigen::MatrixXcd Pb = b * b.adjoint();
  CHECK((Pa * Pa - Pa).norm() <= 1e-8);
  CHECK((Pa - projector(U)).norm() <= 1e-8);
  CHECK((Pa - Pb).norm() <= 1e-8);
  // the K-fixed real span: b's columns are real combinations of a's
  Eigen::MatrixXcd coeff = a.adjoint() * b;
  CHECK(coeff.imag().norm() <= 1e-8);
}

TEST_CASE("real lift of a K-fixed representative has no imaginary part") {
  GridDomain g = build_grid(annulus(0.05));
  LinkField f = aharonov_potential(g, {0.5});
  MagneticHamiltonian H = assemble_magnetic(g, f, zero_potential(g.num_vertices()));
  EigenResult<Complex> r = lowest_eigenpairs(H.matrix, 3);
  CoverGraph c = build_cover(g.graph(), f);
  ThetaField t = build_theta(c);
  Eigen::MatrixXcd reps = real_representatives(r.eigenvectors.leftCols(2), k_operator(g.graph(), f));
  for (int k = 0; k < 2; ++k) {
    RealLift l = real_lift(reps.col(k), t, c);
    CHECK(l.imaginary_defect <= 1e-8);
    CHECK(l.values.norm() == doctest::Approx(1.0).epsilon(1e-8));
  }
}
