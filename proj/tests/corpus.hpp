#pragma once

// Small operators (dimension <= 400) shared by the eigensolver tests and the
// acceptance run. Each is checked against dense diagonalization.

#include "fluxlab/cover.hpp"
#include "fluxlab/gauge.hpp"
#include "fluxlab/geometry.hpp"
#include "fluxlab/operator.hpp"

#include <string>
#include <vector>

namespace testing {

struct CorpusEntry {
  std::string name;
  Eigen::SparseMatrix<fluxlab::Complex> complex;
  Eigen::SparseMatrix<double> real;  // used when `complex` is empty
  bool is_real() const { return complex.rows() == 0; }
  Eigen::Index dimension() const { return is_real() ? real.rows() : complex.rows(); }
};

inline std::vector<CorpusEntry> operator_corpus() {
  using namespace fluxlab;
  std::vector<CorpusEntry> out;
  for (int n : {8, 64, 256})
    for (double alpha : {0.0, 0.25, 0.5, 1.0})
      out.push_back({"circle n=" + std::to_string(n) + " alpha=" + std::to_string(alpha),
                     assemble_circle(n, alpha).matrix, {}});
  out.push_back({"circle n=256 alpha=0.5 eps=0.01", assemble_circle(256, 0.5, circle_cosine(256, 0.01)).matrix, {}});

  const DomainSpec annulus{Disk{{0, 0}, 1}, {Disk{{0, 0}, 0.3}}, 0.1};
  GridDomain g = build_grid(annulus);
  const PotentialField zero = zero_potential(g.num_vertices());
  const PotentialField well = radial_well(g, {0.1, 0}, 0.6, 0.2, 5.0);
  for (double phi : {0.0, 0.25, 0.5}) {
    LinkField f = aharonov_potential(g, {phi});
    out.push_back({"annulus phi=" + std::to_string(phi), assemble_magnetic(g, f, zero).matrix, {}});
    out.push_back({"annulus well phi=" + std::to_string(phi), assemble_magnetic(g, f, well).matrix, {}});
  }
  out.push_back({"annulus dirichlet phi=0.5",
                 assemble_magnetic(g, aharonov_potential(g, {0.5}), zero, BoundaryCondition::Dirichlet).matrix, {}});
  out.push_back({"annulus slit",
                 assemble_slit(g, aharonov_potential(g, {0.0}), zero, radial_slit(g, {0, 0}, 0.7)).matrix, {}});

  GridDomain strip = build_grid({Rect{{0, 0}, {2, 0.3}}, {}, 0.1});
  out.push_back({"strip", assemble_magnetic(strip, LinkField{Eigen::VectorXd::Zero(strip.num_edges())},
                                            zero_potential(strip.num_vertices()))
                              .matrix,
                 {}});

  // lifted operators of the half-flux circle and its antisymmetric block
  CoverGraph cc = build_cover(circle_graph(64), circle_field(64, 0.5));
  RealHamiltonian lifted = assemble_lifted(cc, zero_potential(64), 2.0 * 3.141592653589793 / 64);
  out.push_back({"circle cover n=64", {}, lifted.matrix});
  out.push_back({"circle cover antisymmetric block", {}, project_onto(lifted.matrix, antisymmetric_basis(cc))});
  return out;
}

}  // namespace testing
