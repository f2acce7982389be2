#pragma once

// The sublattice-symmetric subspace K of the periodic PXP chain and the
// operators projected into it.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <compare>
#include <memory>
#include <variant>
#include <vector>

#include "scarlab/combinatorics.hpp"

namespace scarlab {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

struct Label {
  int n1 = 0;
  int n2 = 0;
  int total() const { return n1 + n2; }
  Label swapped() const { return {n2, n1}; }
  auto operator<=>(const Label&) const = default;
};

class SymBasis {
 public:
  // Labels ordered by (n1 + n2, n1); admissible means nonzero periodic class size.
  static std::shared_ptr<const SymBasis> build(int N);

  int N() const { return N_; }
  int half() const { return N_ / 2; }
  std::size_t size() const { return labels_.size(); }
  const std::vector<Label>& labels() const { return labels_; }
  const Label& label(std::size_t i) const { return labels_[i]; }
  bool contains(Label l) const;
  std::size_t index(Label l) const;  // throws ValidationError when absent

  Label neel() const { return {half(), 0}; }
  Label anti_neel() const { return {0, half()}; }

  const ClassTable& class_sizes() const { return classes_; }

  static std::size_t expected_dimension(int N);

 private:
  int N_ = 0;
  std::vector<Label> labels_;
  std::vector<long> index_;  // (half+1)^2, -1 where absent
  ClassTable classes_;
};

using BasisPtr = std::shared_ptr<const SymBasis>;

struct SymVector {
  BasisPtr basis;
  Eigen::VectorXcd coeffs;

  static SymVector zero(BasisPtr basis);
  static SymVector basis_state(BasisPtr basis, Label l);
  double norm2() const { return coeffs.squaredNorm(); }
  std::complex<double> coeff(Label l) const { return coeffs[basis->index(l)]; }
  SymVector swapped() const;  // n1 <-> n2 coefficient exchange
};

void require_same_basis(const BasisPtr& a, const BasisPtr& b);

class SymOperator {
 public:
  SymOperator(BasisPtr basis, SparseMatrix m);
  SymOperator(BasisPtr basis, Eigen::VectorXd diagonal);

  const BasisPtr& basis() const { return basis_; }
  bool is_diagonal() const { return std::holds_alternative<Eigen::VectorXd>(storage_); }
  const SparseMatrix& sparse() const;
  const Eigen::VectorXd& diagonal() const;

  double element(std::size_t i, std::size_t j) const;
  Eigen::MatrixXd dense() const;
  Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const;
  SymVector apply(const SymVector& v) const;
  double expectation(const SymVector& v) const;  // <v|A|v> / <v|v>

 private:
  BasisPtr basis_;
  std::variant<SparseMatrix, Eigen::VectorXd> storage_;
};

// Closed-form PXP matrix element <(n1-1, n2)|H|(n1, n2)>.
double lowering_element(int N, int n1, int n2);

SymOperator build_hamiltonian(const BasisPtr& basis);

// Diagonal energy variance K(H^2) - K(H)^2 at one label.
double variance_entry(int N, int n1, int n2);
SymOperator build_variance_operator(const BasisPtr& basis);

// Symmetric (even) and antisymmetric (odd) combinations under n1 <-> n2.
// Exchange is translation by one site on K, so the blocks are the k = 0 and
// k = pi sectors. Block members are ordered Neel pair first, then by
// descending n1 + n2 and descending n1, which keeps the blocks banded.
enum class Parity { even, odd };

struct ParityBlock {
  Parity parity = Parity::even;
  std::vector<Label> representatives;  // n1 >= n2
  SparseMatrix matrix;

  std::size_t size() const { return representatives.size(); }
  int bandwidth() const;
  // Column i: unit vector over SymBasis for block member i.
  Eigen::VectorXd member_vector(const SymBasis& basis, std::size_t i) const;
  Eigen::VectorXcd to_block(const SymBasis& basis, const Eigen::VectorXcd& v) const;
  Eigen::VectorXcd from_block(const SymBasis& basis, const Eigen::VectorXcd& w) const;
};

struct ParityBlocks {
  ParityBlock even;
  ParityBlock odd;
};

ParityBlocks exchange_parity_blocks(const BasisPtr& basis, const SymOperator& H);

// Diagonal density observable (n1 + n2) / N.
Eigen::VectorXd density_diagonal(const SymBasis& basis);

}  // namespace scarlab
