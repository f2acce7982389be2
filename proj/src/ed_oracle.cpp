#include "scarlab/ed_oracle.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>

#include "scarlab/error.hpp"

namespace scarlab::ed {

namespace {

std::uint64_t rotl(std::uint64_t s, int N, std::uint64_t mask) { return ((s << 1) | (s >> (N - 1))) & mask; }

// Bits on sublattice 1 (odd sites = even bit positions).
std::uint64_t odd_site_mask(int N) {
  std::uint64_t m = 0;
  for (int b = 0; b < N; b += 2) m |= std::uint64_t(1) << b;
  return m;
}

void grow(int N, int pos, std::uint64_t s, std::vector<std::uint64_t>& out) {
  if (pos == N) {
    // Wrap-around bond between site N and site 1.
    if (!((s >> (N - 1)) & 1 && s & 1)) out.push_back(s);
    return;
  }
  grow(N, pos + 1, s, out);
  if (pos == 0 || !((s >> (pos - 1)) & 1)) grow(N, pos + 1, s | (std::uint64_t(1) << pos), out);
}

}  // namespace

bool FullBasis::admissible(std::uint64_t s) const {
  if (s & ~mask_) return false;
  return (s & rotl(s, N_, mask_)) == 0;
}

long FullBasis::find(std::uint64_t s) const {
  auto it = std::lower_bound(states_.begin(), states_.end(), s);
  if (it == states_.end() || *it != s) return -1;
  return long(it - states_.begin());
}

std::size_t FullBasis::index(std::uint64_t s) const {
  const long i = find(s);
  if (i < 0) throw ValidationError("bitstring is not in the constrained basis");
  return std::size_t(i);
}

Label FullBasis::sublattice_counts(std::uint64_t s) const {
  const std::uint64_t odd = odd_site_mask(N_);
  return {std::popcount(s & odd), std::popcount(s & ~odd & mask_)};
}

FullBasisPtr enumerate_basis(int N, int cap) {
  require(N >= 2, "N must be at least 2, got " + std::to_string(N));
  require(N <= cap, "N=" + std::to_string(N) + " exceeds the full-space cap " + std::to_string(cap));
  require(N <= 63, "full-space enumeration supports at most 63 sites");
  auto b = std::shared_ptr<FullBasis>(new FullBasis());
  b->N_ = N;
  b->mask_ = (std::uint64_t(1) << N) - 1;
  grow(N, 0, 0, b->states_);
  std::sort(b->states_.begin(), b->states_.end());
  return b;
}

SparseMatrix build_pxp(const FullBasis& basis) {
  const int N = basis.N();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(basis.size() * std::size_t(N) / 2);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const std::uint64_t s = basis.state(i);
    for (int b = 0; b < N; ++b) {
      const std::uint64_t t = s ^ (std::uint64_t(1) << b);
      const long j = (t < s) ? basis.find(t) : (basis.admissible(t) ? basis.find(t) : -1);
      if (j >= 0) trips.emplace_back(Eigen::Index(i), Eigen::Index(j), 1.0);
    }
  }
  SparseMatrix h(Eigen::Index(basis.size()), Eigen::Index(basis.size()));
  h.setFromTriplets(trips.begin(), trips.end());
  return h;
}

linalg::EigenSystem full_spectrum(const FullBasis& basis, int cap) {
  require(basis.N() <= cap, "N=" + std::to_string(basis.N()) + " exceeds the dense ED cap " + std::to_string(cap));
  const Eigen::MatrixXd h = Eigen::MatrixXd(build_pxp(basis));
  return linalg::symmetric_eigen(h, "full PXP N=" + std::to_string(basis.N()));
}

SparseMatrix embedding_matrix(const FullBasis& full, const SymBasis& sym) {
  require(full.N() == sym.N(), "full and symmetric bases have different N");
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(full.size());
  std::vector<double> weight(sym.size());
  for (std::size_t k = 0; k < sym.size(); ++k) {
    const Label l = sym.label(k);
    weight[k] = 1.0 / std::sqrt(sym.class_sizes().at(l.n1, l.n2).value());
  }
  for (std::size_t i = 0; i < full.size(); ++i) {
    const std::size_t k = sym.index(full.sublattice_counts(full.state(i)));
    trips.emplace_back(Eigen::Index(i), Eigen::Index(k), weight[k]);
  }
  SparseMatrix e(Eigen::Index(full.size()), Eigen::Index(sym.size()));
  e.setFromTriplets(trips.begin(), trips.end());
  return e;
}

FullVector embed(const SymVector& v, const FullBasisPtr& full) {
  const SparseMatrix e = embedding_matrix(*full, *v.basis);
  return {full, linalg::spmv(e, v.coeffs)};
}

SymVector project(const FullVector& v, const BasisPtr& sym) {
  const SparseMatrix e = embedding_matrix(*v.basis, *sym);
  const SparseMatrix et = e.transpose();
  return {sym, linalg::spmv(et, v.coeffs)};
}

FullVector evolve_krylov(const SparseMatrix& H, const FullVector& psi0, double t, double dt,
                         const std::function<void(double, const FullVector&)>& observe) {
  require(dt > 0.0, "dt must be positive");
  require(t >= 0.0, "t must be non-negative");
  FullVector cur = psi0;
  const double n0 = std::sqrt(psi0.norm2());
  double now = 0.0;
  const long steps = long(std::ceil(t / dt - 1e-9));
  for (long k = 0; k < steps; ++k) {
    const double next = std::min(t, double(k + 1) * dt);
    cur.coeffs = linalg::krylov_expm(H, cur.coeffs, next - now);
    now = next;
    const double drift = std::abs(std::sqrt(cur.norm2()) - n0) / std::max(n0, 1e-300);
    if (drift > 1e-9) throw NumericalError("Krylov step lost unitarity (relative norm error " + std::to_string(drift) + ")");
    if (observe) observe(now, cur);
  }
  return cur;
}

double reduced_entropy(const FullVector& psi, int N_L, int cap) {
  const int N = psi.basis->N();
  require(N <= cap, "N=" + std::to_string(N) + " exceeds the partial-trace cap " + std::to_string(cap));
  require(N_L > 0 && N_L < N, "cut must leave both halves non-empty");
  const std::uint64_t lmask = (std::uint64_t(1) << N_L) - 1;
  std::map<std::uint64_t, Eigen::Index> left, right;
  for (std::uint64_t s : psi.basis->states()) {
    left.emplace(s & lmask, 0);
    right.emplace(s >> N_L, 0);
  }
  Eigen::Index c = 0;
  for (auto& [k, v] : left) v = c++;
  c = 0;
  for (auto& [k, v] : right) v = c++;
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(Eigen::Index(left.size()), Eigen::Index(right.size()));
  for (std::size_t i = 0; i < psi.basis->size(); ++i) {
    const std::uint64_t s = psi.basis->state(i);
    a(left[s & lmask], right[s >> N_L]) = psi.coeffs[Eigen::Index(i)];
  }
  const Eigen::VectorXd sv = Eigen::BDCSVD<Eigen::MatrixXcd>(a).singularValues();
  double s = 0.0;
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    const double p = sv[k] * sv[k];
    if (sv[k] > 1e-14) s -= p * std::log(p);
  }
  return s;
}

FullVector translate(const FullVector& v) {
  const FullBasis& b = *v.basis;
  const std::uint64_t mask = (std::uint64_t(1) << b.N()) - 1;
  FullVector out{v.basis, Eigen::VectorXcd::Zero(v.coeffs.size())};
  for (std::size_t i = 0; i < b.size(); ++i)
    out.coeffs[Eigen::Index(b.index(rotl(b.state(i), b.N(), mask)))] = v.coeffs[Eigen::Index(i)];
  return out;
}

FullVector mps_state(const FullBasisPtr& basis, const std::array<Eigen::Matrix2cd, 2>& empty,
                     const std::array<Eigen::Matrix2cd, 2>& excited) {
  const int N = basis->N();
  FullVector out{basis, Eigen::VectorXcd(Eigen::Index(basis->size()))};
  for (std::size_t i = 0; i < basis->size(); ++i) {
    const std::uint64_t s = basis->state(i);
    Eigen::Matrix2cd p = Eigen::Matrix2cd::Identity();
    for (int b = 0; b < N; ++b) {
      const int sub = b % 2;
      p = p * (((s >> b) & 1) ? excited[std::size_t(sub)] : empty[std::size_t(sub)]);
    }
    out.coeffs[Eigen::Index(i)] = p.trace();
  }
  return out;
}

FullVector coherent_mps(const FullBasisPtr& basis, double theta1, double phi1, double theta2, double phi2) {
  const std::complex<double> I(0, 1);
  std::array<Eigen::Matrix2cd, 2> empty, excited;
  const double th[2] = {theta1, theta2}, ph[2] = {phi1, phi2};
  for (int k = 0; k < 2; ++k) {
    empty[std::size_t(k)] << std::cos(th[k] / 2), 0, 1, 0;
    excited[std::size_t(k)] << 0, -I * std::exp(I * ph[k]) * std::sin(th[k] / 2), 0, 0;
  }
  return mps_state(basis, empty, excited);
}

FullVector holomorphic_mps(const FullBasisPtr& basis, std::complex<double> z1, std::complex<double> z2) {
  std::array<Eigen::Matrix2cd, 2> empty, excited;
  const std::complex<double> z[2] = {z1, z2};
  for (int k = 0; k < 2; ++k) {
    empty[std::size_t(k)] << 1, 0, 1, 0;
    excited[std::size_t(k)] << 0, z[k], 0, 0;
  }
  return mps_state(basis, empty, excited);
}

SpanRank span_rank_check(int N) {
  const int M = N / 2;
  std::vector<std::complex<double>> z1, z2;
  for (int k = 0; k <= M; ++k) {
    const double a = 2.0 * M_PI * k / (M + 1);
    z1.push_back(std::polar(1.0, a));
    // Offset the second grid so no point sits on the first one.
    z2.push_back(std::polar(1.0, a + M_PI / (M + 1)));
  }
  return span_rank_check(N, z1, z2);
}

SpanRank span_rank_check(int N, const std::vector<std::complex<double>>& z1s,
                         const std::vector<std::complex<double>>& z2s) {
  require(N <= 16, "span check supports N <= 16");
  auto full = enumerate_basis(N);
  auto sym = SymBasis::build(N);
  const SparseMatrix e = embedding_matrix(*full, *sym);
  const SparseMatrix et = e.transpose();
  const Eigen::Index cols = Eigen::Index(z1s.size() * z2s.size());
  Eigen::MatrixXcd m(Eigen::Index(sym->size()), cols);
  SpanRank out;
  out.dimension = int(sym->size());
  Eigen::Index c = 0;
  for (auto z1 : z1s)
    for (auto z2 : z2s) {
      const FullVector v = holomorphic_mps(full, z1, z2);
      const Eigen::VectorXcd k = linalg::spmv(et, v.coeffs);
      const double leak = (v.coeffs - linalg::spmv(e, k)).norm() / std::max(v.coeffs.norm(), 1e-300);
      out.max_leakage = std::max(out.max_leakage, leak);
      m.col(c++) = k;
    }
  out.singular_values = Eigen::BDCSVD<Eigen::MatrixXcd>(m).singularValues();
  const double smax = out.singular_values.size() ? out.singular_values[0] : 0.0;
  const double tol = smax * 1e-10 * double(std::max(m.rows(), m.cols()));
  out.rank = 0;
  for (Eigen::Index k = 0; k < out.singular_values.size(); ++k)
    if (out.singular_values[k] > tol) ++out.rank;
  if (out.rank < out.singular_values.size())
    out.gap = out.rank == 0 ? 0.0 : out.singular_values[out.rank - 1] / std::max(out.singular_values[out.rank], 1e-300);
  else
    out.gap = std::numeric_limits<double>::infinity();
  if (out.rank < out.dimension) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "coherent states span rank %d < dim K = %d (singular-value gap %.3e)", out.rank,
                  out.dimension, out.gap);
    throw NumericalError(buf);
  }
  return out;
}

namespace {
constexpr char kMagic[4] = {'S', 'C', 'L', 'B'};
constexpr std::uint32_t kSnapshotVersion = 1;

template <class T>
void put(std::ostream& os, T v) {
  static_assert(std::endian::native == std::endian::little, "snapshot I/O assumes a little-endian host");
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}
template <class T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!is) throw ValidationError("truncated snapshot");
  return v;
}
}  // namespace

void write_snapshot(const std::string& path, const FullVector& v) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ValidationError("cannot open " + path + " for writing");
  os.write(kMagic, 4);
  put<std::uint32_t>(os, kSnapshotVersion);
  put<std::uint32_t>(os, std::uint32_t(v.basis->N()));
  put<std::uint64_t>(os, std::uint64_t(v.coeffs.size()));
  for (Eigen::Index i = 0; i < v.coeffs.size(); ++i) {
    put<float>(os, float(v.coeffs[i].real()));
    put<float>(os, float(v.coeffs[i].imag()));
  }
}

FullVector read_snapshot(const std::string& path, const FullBasisPtr& basis) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ValidationError("cannot open " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0) throw ValidationError(path + " is not a state snapshot");
  const auto version = get<std::uint32_t>(is);
  if (version != kSnapshotVersion) throw ValidationError("unsupported snapshot version " + std::to_string(version));
  const auto N = get<std::uint32_t>(is);
  const auto dim = get<std::uint64_t>(is);
  if (int(N) != basis->N() || dim != basis->size()) throw ValidationError("snapshot does not match the basis");
  FullVector v{basis, Eigen::VectorXcd(Eigen::Index(dim))};
  for (std::uint64_t i = 0; i < dim; ++i) {
    const float re = get<float>(is);
    const float im = get<float>(is);
    v.coeffs[Eigen::Index(i)] = {re, im};
  }
  return v;
}

}  // namespace scarlab::ed
