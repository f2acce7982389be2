#pragma once

#include <Eigen/Dense>
#include <string>

#include "scarlab/symspace.hpp"

namespace scarlab::linalg {

struct EigenSystem {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns
};

// Dense real-symmetric eigendecomposition (LAPACK dsyevd). `tag` names the
// block in the error raised on non-convergence.
EigenSystem symmetric_eigen(const Eigen::MatrixXd& a, const std::string& tag = "matrix");
Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& a, const std::string& tag = "matrix");

// Eigenvalues of a sparse symmetric matrix together with the squared first
// component of every eigenvector, without forming eigenvectors. The matrix is
// reduced to tridiagonal form with band Householder transforms that never
// touch the first coordinate, and the tridiagonal QL iteration tracks only
// the first row of its rotations.
struct SpectralMeasure {
  Eigen::VectorXd values;   // ascending
  Eigen::VectorXd weights;  // |<e_0|q_k>|^2
};
SpectralMeasure banded_spectral_measure(const SparseMatrix& a, const std::string& tag = "matrix");

// Same for a symmetric tridiagonal matrix (diag, offdiag); exposed for tests.
SpectralMeasure tridiagonal_spectral_measure(Eigen::VectorXd diag, Eigen::VectorXd offdiag,
                                             const std::string& tag = "matrix");

Eigen::VectorXcd spmv(const SparseMatrix& a, const Eigen::VectorXcd& v);

struct KrylovOptions {
  double tolerance = 1e-12;  // on the a-posteriori error estimate, relative to |v|
  int max_dimension = 40;
};

// exp(-i t A) v for real symmetric sparse A by short-iteration Lanczos, with
// automatic substepping when the Krylov space fails to converge.
Eigen::VectorXcd krylov_expm(const SparseMatrix& a, const Eigen::VectorXcd& v, double t,
                             const KrylovOptions& opts = {});

}  // namespace scarlab::linalg
