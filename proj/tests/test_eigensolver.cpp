#include "support.hpp"

#include "corpus.hpp"
#include "fluxlab/eigensolver.hpp"
#include "fluxlab/operator.hpp"

#include <numbers>
#include <random>

using namespace fluxlab;
using testing::code_of;
using testing::dense_eigenvalues;

namespace {

template <typename Scalar>
void check_against_dense(const Eigen::SparseMatrix<Scalar>& H, int m) {
  Eigen::VectorXd dense = dense_eigenvalues(H);
  EigenResult<Scalar> r = lowest_eigenpairs(H, m);
  REQUIRE(r.eigenvalues.size() == m);
  for (int i = 0; i < m; ++i) CHECK(std::abs(r.eigenvalues[i] - dense[i]) <= 1e-9);
  for (int i = 1; i < m; ++i) CHECK(r.eigenvalues[i] >= r.eigenvalues[i - 1]);
  auto gram = (r.eigenvectors.adjoint() * r.eigenvectors).eval();
  CHECK((gram - decltype(gram)::Identity(m, m)).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK(r.residuals.maxCoeff() <= SolverOptions{}.tol * r.norm_estimate);
}

}  // namespace

TEST_CASE("8-point circle: 0 and a degenerate pair, as the dense oracle") {
  MagneticHamiltonian H = assemble_circle(8, 0.0);
  EigenResult<Complex> r = lowest_eigenpairs(H.matrix, 3);
  Eigen::VectorXd dense = dense_eigenvalues(H.matrix);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(r.eigenvalues[i] - dense[i]) <= 1e-10);
  CHECK(std::abs(r.eigenvalues[0]) <= 1e-10);
  CHECK(std::abs(r.eigenvalues[1] - r.eigenvalues[2]) <= 1e-10);
  CHECK(r.eigenvalues[1] > 0.5);
}

TEST_CASE("every corpus operator matches dense diagonalization") {
  for (const auto& entry : testing::operator_corpus()) {
    CAPTURE(entry.name);
    REQUIRE(entry.dimension() <= 400);
    if (entry.is_real())
      check_against_dense(entry.real, 4);
    else
      check_against_dense(entry.complex, 4);
  }
}

TEST_CASE("half-flux circle ground pair sits at 1/4 to second order") {
  EigenResult<Complex> r = lowest_eigenpairs(assemble_circle(256, 0.5).matrix, 2);
  const double h = 2 * std::numbers::pi / 256;
  CHECK(std::abs(r.eigenvalues[0] - 0.25) <= h * h);
  CHECK(std::abs(r.eigenvalues[1] - 0.25) <= h * h);
}

TEST_CASE("requests at or beyond the dimension are rejected") {
  MagneticHamiltonian H = assemble_circle(8, 0.0);
  CHECK(code_of([&] { lowest_eigenpairs(H.matrix, 8); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { lowest_eigenpairs(H.matrix, 9); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { lowest_eigenpairs(H.matrix, 0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("an impossible iteration budget reports its best residuals") {
  MagneticHamiltonian H = assemble_circle(256, 0.3);
  SolverOptions opt;
  opt.krylov_blocks = 2;
  opt.max_restarts = 0;
  opt.tol = 1e-15;
  try {
    lowest_eigenpairs(H.matrix, 3, opt);
    FAIL("expected NoConvergence");
  } catch (const NoConvergence& e) {
    CHECK(e.code() == ErrorCode::NoConvergence);
    CHECK(e.best_residuals().size() == 3);
    CHECK(std::isfinite(e.best_residuals().maxCoeff()));
  }
}

TEST_CASE("multiplicity estimates") {
  CHECK(multiplicity_estimate(std::vector<double>{0.25, 0.2500001, 0.9}, 1e-4) == 2);
  CHECK(multiplicity_estimate(std::vector<double>{0.0, 0.5}, 1e-4) == 1);
  CHECK(multiplicity_estimate(std::vector<double>{1, 1, 1}, 1e-4) == 3);
  CHECK(code_of([] { multiplicity_estimate(std::vector<double>{}, 1e-4); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("lambda1 lies below the Rayleigh quotient of random vectors") {
  MagneticHamiltonian H = assemble_circle(128, 0.3);
  const double l1 = lowest_eigenpairs(H.matrix, 1).eigenvalues[0];
  std::mt19937_64 rng(5);
  std::normal_distribution<double> z;
  for (int t = 0; t < 20; ++t) {
    Eigen::VectorXcd x(128);
    for (auto& c : x) c = Complex(z(rng), z(rng));
    const double q = (x.adjoint() * (H.matrix * x))(0).real() / x.squaredNorm();
    CHECK(l1 <= q + 1e-12);
  }
}

TEST_CASE("fixed seed gives bit-identical results") {
  MagneticHamiltonian H = assemble_circle(256, 0.37);
  EigenResult<Complex> a = lowest_eigenpairs(H.matrix, 3);
  EigenResult<Complex> b = lowest_eigenpairs(H.matrix, 3);
  CHECK(a.eigenvalues == b.eigenvalues);
  CHECK(a.eigenvectors == b.eigenvectors);
}
