#include "scarlab/symspace.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "scarlab/error.hpp"

namespace scarlab {

std::size_t SymBasis::expected_dimension(int N) {
  const std::size_t M = N / 2;
  return M * (M + 1) / 2 + 2;
}

BasisPtr SymBasis::build(int N) {
  require(N % 2 == 0, "N must be even, got " + std::to_string(N));
  require(N >= 4, "N must be at least 4, got " + std::to_string(N));
  auto b = std::make_shared<SymBasis>();
  b->N_ = N;
  b->classes_ = ClassTable::build(N, Boundary::periodic);
  const int M = N / 2;
  b->index_.assign(std::size_t(M + 1) * (M + 1), -1);
  for (int n = 0; n <= M; ++n)
    for (int n1 = 0; n1 <= n; ++n1) {
      const int n2 = n - n1;
      if (b->classes_.at(n1, n2).zero) continue;
      b->index_[std::size_t(n1) * (M + 1) + n2] = long(b->labels_.size());
      b->labels_.push_back({n1, n2});
    }
  return b;
}

bool SymBasis::contains(Label l) const {
  const int M = half();
  if (l.n1 < 0 || l.n2 < 0 || l.n1 > M || l.n2 > M) return false;
  return index_[std::size_t(l.n1) * (M + 1) + l.n2] >= 0;
}

std::size_t SymBasis::index(Label l) const {
  if (!contains(l))
    throw ValidationError("label (" + std::to_string(l.n1) + "," + std::to_string(l.n2) +
                          ") is not in the basis for N=" + std::to_string(N_));
  return std::size_t(index_[std::size_t(l.n1) * (half() + 1) + l.n2]);
}

SymVector SymVector::zero(BasisPtr basis) {
  SymVector v{basis, Eigen::VectorXcd::Zero(Eigen::Index(basis->size()))};
  return v;
}

SymVector SymVector::basis_state(BasisPtr basis, Label l) {
  SymVector v = zero(basis);
  v.coeffs[basis->index(l)] = 1.0;
  return v;
}

SymVector SymVector::swapped() const {
  SymVector out = zero(basis);
  for (std::size_t i = 0; i < basis->size(); ++i)
    out.coeffs[basis->index(basis->label(i).swapped())] = coeffs[i];
  return out;
}

void require_same_basis(const BasisPtr& a, const BasisPtr& b) {
  if (a.get() == b.get()) return;
  if (!a || !b || a->N() != b->N()) throw ValidationError("basis mismatch");
}

SymOperator::SymOperator(BasisPtr basis, SparseMatrix m) : basis_(std::move(basis)), storage_(std::move(m)) {}
SymOperator::SymOperator(BasisPtr basis, Eigen::VectorXd diagonal)
    : basis_(std::move(basis)), storage_(std::move(diagonal)) {}

const SparseMatrix& SymOperator::sparse() const {
  if (is_diagonal()) throw ValidationError("operator is stored as a diagonal");
  return std::get<SparseMatrix>(storage_);
}

const Eigen::VectorXd& SymOperator::diagonal() const {
  if (!is_diagonal()) throw ValidationError("operator is stored sparse");
  return std::get<Eigen::VectorXd>(storage_);
}

double SymOperator::element(std::size_t i, std::size_t j) const {
  if (is_diagonal()) return i == j ? diagonal()[Eigen::Index(i)] : 0.0;
  return sparse().coeff(Eigen::Index(i), Eigen::Index(j));
}

Eigen::MatrixXd SymOperator::dense() const {
  if (is_diagonal()) return diagonal().asDiagonal();
  return Eigen::MatrixXd(sparse());
}

Eigen::VectorXcd SymOperator::apply(const Eigen::VectorXcd& v) const {
  if (is_diagonal()) return diagonal().cast<std::complex<double>>().cwiseProduct(v);
  const SparseMatrix& m = sparse();
  Eigen::VectorXcd out(v.size());
  out.real() = m * v.real();
  out.imag() = m * v.imag();
  return out;
}

SymVector SymOperator::apply(const SymVector& v) const {
  require_same_basis(basis_, v.basis);
  return {v.basis, apply(v.coeffs)};
}

double SymOperator::expectation(const SymVector& v) const {
  const std::complex<double> num = v.coeffs.dot(apply(v.coeffs));
  return num.real() / v.norm2();
}

double lowering_element(int N, int n1, int n2) {
  const int M = N / 2;
  if (n1 <= 0) return 0.0;
  if (n1 == M) return n2 == 0 ? std::sqrt(double(n1) * (M + 1 - n1)) : 0.0;
  const int n = n1 + n2;
  if (n > M) return 0.0;
  return std::sqrt(double(n1) * (M - n) * (M - n + 1) / double(M - n1));
}

SymOperator build_hamiltonian(const BasisPtr& basis) {
  const int N = basis->N();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(basis->size() * 4);
  for (std::size_t i = 0; i < basis->size(); ++i) {
    const Label l = basis->label(i);
    if (l.n1 > 0) {
      const Label lo{l.n1 - 1, l.n2};
      const double h = lowering_element(N, l.n1, l.n2);
      if (h != 0.0 && basis->contains(lo)) {
        const std::size_t j = basis->index(lo);
        trips.emplace_back(Eigen::Index(j), Eigen::Index(i), h);
        trips.emplace_back(Eigen::Index(i), Eigen::Index(j), h);
      }
    }
    if (l.n2 > 0) {
      const Label lo{l.n1, l.n2 - 1};
      const double h = lowering_element(N, l.n2, l.n1);
      if (h != 0.0 && basis->contains(lo)) {
        const std::size_t j = basis->index(lo);
        trips.emplace_back(Eigen::Index(j), Eigen::Index(i), h);
        trips.emplace_back(Eigen::Index(i), Eigen::Index(j), h);
      }
    }
  }
  SparseMatrix m(Eigen::Index(basis->size()), Eigen::Index(basis->size()));
  m.setFromTriplets(trips.begin(), trips.end());
  return SymOperator(basis, std::move(m));
}

namespace {
// n1 * n2 (n2 - 1) / ((M - n1 - 1)(M - n1)); the numerator vanishes whenever
// the denominator does on admissible labels.
double variance_term(int M, int a, int b) {
  const double num = double(a) * b * (b - 1);
  if (num == 0.0) return 0.0;
  return num / (double(M - a - 1) * double(M - a));
}
}  // namespace

double variance_entry(int N, int n1, int n2) {
  const int M = N / 2;
  return variance_term(M, n1, n2) + variance_term(M, n2, n1);
}

SymOperator build_variance_operator(const BasisPtr& basis) {
  Eigen::VectorXd d(Eigen::Index(basis->size()));
  for (std::size_t i = 0; i < basis->size(); ++i) {
    const Label l = basis->label(i);
    d[Eigen::Index(i)] = variance_entry(basis->N(), l.n1, l.n2);
  }
  return SymOperator(basis, std::move(d));
}

Eigen::VectorXd density_diagonal(const SymBasis& basis) {
  Eigen::VectorXd d(Eigen::Index(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) d[Eigen::Index(i)] = double(basis.label(i).total()) / basis.N();
  return d;
}

int ParityBlock::bandwidth() const {
  int bw = 0;
  for (int k = 0; k < matrix.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(matrix, k); it; ++it) bw = std::max(bw, int(std::abs(it.row() - it.col())));
  return bw;
}

namespace {

// Weights of block member `rep` on SymBasis labels.
std::vector<std::pair<std::size_t, double>> member_entries(const SymBasis& basis, Label rep, Parity p) {
  if (rep.n1 == rep.n2) return {{basis.index(rep), 1.0}};
  const double s = 1.0 / std::sqrt(2.0);
  return {{basis.index(rep), s}, {basis.index(rep.swapped()), p == Parity::even ? s : -s}};
}

ParityBlock make_block(const BasisPtr& basis, const SymOperator& H, Parity p) {
  ParityBlock blk;
  blk.parity = p;
  for (const Label& l : basis->labels())
    if (l.n1 > l.n2 || (l.n1 == l.n2 && p == Parity::even)) blk.representatives.push_back(l);
  std::sort(blk.representatives.begin(), blk.representatives.end(), [](Label a, Label b) {
    if (a.total() != b.total()) return a.total() > b.total();
    return a.n1 > b.n1;
  });
  std::map<Label, std::size_t> pos;
  for (std::size_t i = 0; i < blk.representatives.size(); ++i) pos[blk.representatives[i]] = i;

  // Coefficient of member j in a SymBasis vector component at label x.
  auto project = [&](Label x) -> std::pair<std::size_t, double> {
    const Label rep = x.n1 >= x.n2 ? x : x.swapped();
    const std::size_t j = pos.at(rep);
    if (rep.n1 == rep.n2) return {j, 1.0};
    const double s = 1.0 / std::sqrt(2.0);
    return {j, (x == rep || p == Parity::even) ? s : -s};
  };

  const SparseMatrix& h = H.sparse();
  std::vector<Eigen::Triplet<double>> trips;
  for (std::size_t i = 0; i < blk.representatives.size(); ++i) {
    std::map<std::size_t, double> col;
    for (auto [xi, wi] : member_entries(*basis, blk.representatives[i], p)) {
      for (SparseMatrix::InnerIterator it(h, Eigen::Index(xi)); it; ++it) {
        const Label y = basis->label(std::size_t(it.col()));
        if (p == Parity::odd && y.n1 == y.n2) continue;
        auto [j, wj] = project(y);
        col[j] += wi * it.value() * wj;
      }
    }
    for (auto [j, v] : col)
      if (std::abs(v) > 1e-15) trips.emplace_back(Eigen::Index(j), Eigen::Index(i), v);
  }
  const auto n = Eigen::Index(blk.representatives.size());
  blk.matrix.resize(n, n);
  blk.matrix.setFromTriplets(trips.begin(), trips.end());
  return blk;
}

}  // namespace

Eigen::VectorXd ParityBlock::member_vector(const SymBasis& basis, std::size_t i) const {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(Eigen::Index(basis.size()));
  for (auto [x, w] : member_entries(basis, representatives[i], parity)) v[Eigen::Index(x)] = w;
  return v;
}

Eigen::VectorXcd ParityBlock::to_block(const SymBasis& basis, const Eigen::VectorXcd& v) const {
  Eigen::VectorXcd w(static_cast<Eigen::Index>(size()));
  for (std::size_t i = 0; i < size(); ++i) {
    std::complex<double> acc = 0;
    for (auto [x, wt] : member_entries(basis, representatives[i], parity)) acc += wt * v[Eigen::Index(x)];
    w[Eigen::Index(i)] = acc;
  }
  return w;
}

Eigen::VectorXcd ParityBlock::from_block(const SymBasis& basis, const Eigen::VectorXcd& w) const {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(Eigen::Index(basis.size()));
  for (std::size_t i = 0; i < size(); ++i)
    for (auto [x, wt] : member_entries(basis, representatives[i], parity)) v[Eigen::Index(x)] += wt * w[Eigen::Index(i)];
  return v;
}

ParityBlocks exchange_parity_blocks(const BasisPtr& basis, const SymOperator& H) {
  require_same_basis(basis, H.basis());
  return {make_block(basis, H, Parity::even), make_block(basis, H, Parity::odd)};
}

}  // namespace scarlab
