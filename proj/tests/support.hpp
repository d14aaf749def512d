#pragma once

#include "fluxlab/error.hpp"
#include "fluxlab/geometry.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <doctest.h>

#include <complex>

namespace testing {

inline fluxlab::DomainSpec annulus(double h, double inner = 0.3) {
  return {fluxlab::Disk{{0.0, 0.0}, 1.0}, {fluxlab::Disk{{0.0, 0.0}, inner}}, h};
}

inline fluxlab::DomainSpec two_holes(double h) {
  return {fluxlab::Rect{{0.0, 0.0}, {3.0, 1.0}},
          {fluxlab::Disk{{1.0, 0.5}, 0.2}, fluxlab::Disk{{2.0, 0.5}, 0.2}},
          h};
}

// Independent oracle: full dense diagonalization.
template <typename Scalar>
Eigen::VectorXd dense_eigenvalues(const Eigen::SparseMatrix<Scalar>& H) {
  using Dense = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Dense d = Dense(H);
  return Eigen::SelfAdjointEigenSolver<Dense>(d, Eigen::EigenvaluesOnly).eigenvalues();
}

template <typename F>
fluxlab::ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const fluxlab::Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return fluxlab::ErrorCode::InvalidArgument;
}

}  // namespace testing

namespace testing {

// Counter-clockwise lattice rectangle with corners (i0, j0) and (i1, j1).
inline fluxlab::LatticeLoop rectangle_loop(const fluxlab::GridDomain& g, int i0, int j0, int i1, int j1) {
  std::vector<fluxlab::LatticeIndex> path;
  for (int i = i0; i < i1; ++i) path.push_back({i, j0});
  for (int j = j0; j < j1; ++j) path.push_back({i1, j});
  for (int i = i1; i > i0; --i) path.push_back({i, j1});
  for (int j = j1; j > j0; --j) path.push_back({i0, j});
  fluxlab::LatticeLoop loop;
  for (std::size_t k = 0; k < path.size(); ++k) {
    const int v = g.vertex_at(path[k]);
    const int w = g.vertex_at(path[(k + 1) % path.size()]);
    REQUIRE(v >= 0);
    REQUIRE(w >= 0);
    auto e = g.edge_between(v, w);
    REQUIRE(e);
    loop.vertices.push_back(v);
    loop.edges.push_back(*e);
  }
  return loop;
}

}  // namespace testing
