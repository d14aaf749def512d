#include "fluxlab/eigensolver.hpp"

namespace fluxlab {

int multiplicity_estimate(std::span<const double> eigenvalues, double cluster_tol) {
  if (eigenvalues.empty()) throw Error(ErrorCode::InvalidArgument, "no eigenvalues to cluster");
  if (!(cluster_tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "cluster tolerance must be positive");
  const double first = eigenvalues.front();
  const double width = cluster_tol * (1.0 + std::abs(first));
  int count = 0;
  for (double value : eigenvalues) {
    if (value - first > width) break;
    ++count;
  }
  return count;
}

}  // namespace fluxlab
