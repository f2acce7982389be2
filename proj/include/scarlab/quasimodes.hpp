#pragma once

// Eigenmodes of the Hamiltonian projected into K, their Neel overlaps and the
// top / second band assignment.

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "scarlab/linalg.hpp"
#include "scarlab/symspace.hpp"

namespace scarlab {

enum class Band { top, second, bulk };
std::string to_string(Band b);
std::string to_string(Parity p);

struct QuasimodeSet {
  BasisPtr basis;
  Eigen::VectorXd energies;  // ascending
  // Columns over SymBasis; empty when only the spectral measure was formed.
  Eigen::MatrixXd vectors;
  Eigen::VectorXd neel_overlap;  // |<Z2|q>|^2
  std::vector<Parity> parity;
  std::vector<Band> band;
  Eigen::VectorXd variance;  // <q|sigma^2|q>; NaN without vectors
  std::vector<std::string> flags;

  std::size_t size() const { return std::size_t(energies.size()); }
  bool has_vectors() const { return vectors.cols() > 0; }
  std::vector<std::size_t> members(Band b) const;  // ascending energy
};

struct DiagonalizeOptions {
  // Dense parity-block eigensolver up to this dim K; beyond it only energies
  // and Neel overlaps are formed from the banded reduction.
  std::size_t dense_limit = 5000;
  bool force_measure = false;
};

QuasimodeSet diagonalize(const SymOperator& H, const DiagonalizeOptions& opts = {});

// Greedy labelling. The top band starts at the lowest mode; each of the next
// N modes is the largest-overlap mode in a window one expected spacing wide,
// the spacing being the remaining energy range over the remaining count. The
// second band takes, between consecutive top-band modes, the largest-overlap
// mode not already in the top band. Ties go to the lower energy.
void label_bands(QuasimodeSet& qs);

QuasimodeSet quasimodes(int N, const DiagonalizeOptions& opts = {});

// Sum over distinct eigenvalues of (|P_E phi|^2)^2; eigenvalues closer than
// 1e-10 are treated as one eigenspace.
double participation_ratio(const Eigen::VectorXcd& state, const linalg::EigenSystem& full);

}  // namespace scarlab
