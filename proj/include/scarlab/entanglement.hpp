#pragma once

// Bipartite entanglement of K states without leaving K. The chain is cut at
// bonds (N,1) and (N_L, N_L+1); both pieces are open chains whose strings are
// grouped by sublattice occupation and by the occupation of their two end
// sites. Sites keep their global sublattice.

#include <Eigen/Dense>
#include <vector>

#include "scarlab/symspace.hpp"

namespace scarlab {

struct BoundaryClass {
  int n1 = 0, n2 = 0;
  int first = 0, last = 0;  // occupation of the two end sites
};

struct SchmidtDecomposition {
  int N_L = 0, N_R = 0;
  std::vector<BoundaryClass> left, right;  // rows / columns of `alpha`
  Eigen::MatrixXcd alpha;
  Eigen::VectorXd singular_values;  // descending, values below 1e-14 dropped
};

SchmidtDecomposition schmidt(const SymVector& state, int N_L);
// Default cut: N_L = N/2 (requires N divisible by 4).
SchmidtDecomposition schmidt(const SymVector& state);

double entropy(const SymVector& state, int N_L);
double entropy(const SymVector& state);

}  // namespace scarlab
