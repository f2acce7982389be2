#pragma once

// Brute-force engine on the full blockaded Hilbert space of the periodic
// chain. Only meant for small N; it is the reference everything in K is
// checked against.
//
// Site j (1-based) is bit j-1 of a 64-bit word. Odd sites form sublattice 1.

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "scarlab/linalg.hpp"
#include "scarlab/symspace.hpp"

namespace scarlab::ed {

inline constexpr int kDefaultCap = 28;
inline constexpr int kDenseCap = 18;
inline constexpr int kEntropyCap = 20;

class FullBasis {
 public:
  int N() const { return N_; }
  std::size_t size() const { return states_.size(); }
  const std::vector<std::uint64_t>& states() const { return states_; }
  std::uint64_t state(std::size_t i) const { return states_[i]; }
  // Position of a bitstring; -1 if it is not blockade-satisfying.
  long find(std::uint64_t s) const;
  std::size_t index(std::uint64_t s) const;  // throws when absent

  Label sublattice_counts(std::uint64_t s) const;
  bool admissible(std::uint64_t s) const;

 private:
  friend std::shared_ptr<const FullBasis> enumerate_basis(int N, int cap);
  int N_ = 0;
  std::uint64_t mask_ = 0;
  std::vector<std::uint64_t> states_;  // ascending as unsigned integers
};

using FullBasisPtr = std::shared_ptr<const FullBasis>;

FullBasisPtr enumerate_basis(int N, int cap = kDefaultCap);

struct FullVector {
  FullBasisPtr basis;
  Eigen::VectorXcd coeffs;

  double norm2() const { return coeffs.squaredNorm(); }
};

// PBC PXP Hamiltonian: unit matrix element for every single flip that keeps
// the blockade.
SparseMatrix build_pxp(const FullBasis& basis);

// Dense diagonalization of the full PXP matrix.
linalg::EigenSystem full_spectrum(const FullBasis& basis, int cap = kDenseCap);

// Columns are the K basis vectors written over the full basis.
SparseMatrix embedding_matrix(const FullBasis& full, const SymBasis& sym);

FullVector embed(const SymVector& v, const FullBasisPtr& full);
// Component-wise projection E^T v onto K.
SymVector project(const FullVector& v, const BasisPtr& sym);

// exp(-iHt) psi0 in steps of at most dt. `observe` (optional) is called after
// every step with the current time and state.
FullVector evolve_krylov(const SparseMatrix& H, const FullVector& psi0, double t, double dt,
                         const std::function<void(double, const FullVector&)>& observe = {});

// Von Neumann entropy of the sites 1..N_L.
double reduced_entropy(const FullVector& psi, int N_L, int cap = kEntropyCap);

// Translation by one site: site j -> j+1 (mod N).
FullVector translate(const FullVector& v);

// Traced matrix product state with per-sublattice 2x2 matrices; `empty[i]`
// and `excited[i]` act on the sites of sublattice i+1.
FullVector mps_state(const FullBasisPtr& basis, const std::array<Eigen::Matrix2cd, 2>& empty,
                     const std::array<Eigen::Matrix2cd, 2>& excited);

// Bond-dimension-2 coherent state with angles per sublattice.
FullVector coherent_mps(const FullBasisPtr& basis, double theta1, double phi1, double theta2, double phi2);

// Same family in the holomorphic parametrization A_empty = [[1,0],[1,0]],
// A_excited = [[0,z],[0,0]].
FullVector holomorphic_mps(const FullBasisPtr& basis, std::complex<double> z1, std::complex<double> z2);

struct SpanRank {
  int rank = 0;
  int dimension = 0;  // dim K
  Eigen::VectorXd singular_values;
  double gap = 0.0;         // ratio sigma_rank / sigma_{rank+1} (inf when full)
  double max_leakage = 0.0;  // largest norm of a column outside K
};

// Numerical rank of the coherent states on the product grid z1s x z2s,
// computed from full-space contractions projected into K. Default grid:
// N/2+1 distinct roots of unity per sublattice. Raises NumericalError with
// the singular-value gap when the rank falls short of dim K.
SpanRank span_rank_check(int N);
SpanRank span_rank_check(int N, const std::vector<std::complex<double>>& z1s,
                         const std::vector<std::complex<double>>& z2s);

// Versioned little-endian snapshot: "SCLB" magic, u32 version, u32 N,
// u64 dim, then dim pairs of float32 (re, im).
void write_snapshot(const std::string& path, const FullVector& v);
FullVector read_snapshot(const std::string& path, const FullBasisPtr& basis);

}  // namespace scarlab::ed
