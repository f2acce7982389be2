#include "scarlab/linalg.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "scarlab/error.hpp"

namespace scarlab::linalg {

EigenSystem symmetric_eigen(const Eigen::MatrixXd& a, const std::string& tag) {
  require(a.rows() == a.cols(), "eigensolver needs a square matrix");
  EigenSystem es;
  es.vectors = a;
  es.values.resize(a.rows());
  if (a.rows() == 0) return es;
  const lapack_int n = lapack_int(a.rows());
  const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, es.vectors.data(), n, es.values.data());
  if (info != 0)
    throw NumericalError("dsyevd failed on " + tag + " (info=" + std::to_string(info) + ")");
  return es;
}

Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& a, const std::string& tag) {
  Eigen::MatrixXd work = a;
  Eigen::VectorXd w(a.rows());
  if (a.rows() == 0) return w;
  const lapack_int n = lapack_int(a.rows());
  const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'L', n, work.data(), n, w.data());
  if (info != 0)
    throw NumericalError("dsyevd failed on " + tag + " (info=" + std::to_string(info) + ")");
  return w;
}

SpectralMeasure tridiagonal_spectral_measure(Eigen::VectorXd d, Eigen::VectorXd off, const std::string& tag) {
  const Eigen::Index n = d.size();
  SpectralMeasure out;
  if (n == 0) return out;
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) e[i] = off[i];
  Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
  z[0] = 1.0;

  // Implicit QL with Wilkinson-type shifts; only the first row of the
  // accumulated rotations is kept.
  for (Eigen::Index l = 0; l < n; ++l) {
    int iter = 0;
    Eigen::Index m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
      }
      if (m != l) {
        if (++iter > 200)
          throw NumericalError("tridiagonal QL did not converge on " + tag + " at index " + std::to_string(l));
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        Eigen::Index i;
        bool early = false;
        for (i = m - 1; i >= l; --i) {
          const double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            early = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          const double zf = z[i + 1];
          z[i + 1] = s * z[i] + c * zf;
          z[i] = c * z[i] - s * zf;
        }
        if (early) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return d[a] < d[b]; });
  out.values.resize(n);
  out.weights.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values[k] = d[order[std::size_t(k)]];
    out.weights[k] = z[order[std::size_t(k)]] * z[order[std::size_t(k)]];
  }
  return out;
}

SpectralMeasure banded_spectral_measure(const SparseMatrix& a, const std::string& tag) {
  const Eigen::Index n = a.rows();
  require(n == a.cols(), "spectral measure needs a square matrix");
  if (n == 0) return {};
  int kd = 0;
  for (Eigen::Index k = 0; k < a.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) kd = std::max(kd, int(std::abs(it.row() - it.col())));
  kd = std::max(kd, 1);
  const lapack_int ldab = kd + 1;
  std::vector<double> ab(std::size_t(ldab) * std::size_t(n), 0.0);
  for (Eigen::Index k = 0; k < a.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) {
      const Eigen::Index i = it.row(), j = it.col();
      if (i >= j) ab[std::size_t(i - j) + std::size_t(j) * std::size_t(ldab)] = it.value();
    }
  Eigen::VectorXd d(n), e(std::max<Eigen::Index>(n - 1, 1));
  double qdummy = 0.0;
  const lapack_int info = LAPACKE_dsbtrd(LAPACK_COL_MAJOR, 'N', 'L', lapack_int(n), kd, ab.data(), ldab, d.data(),
                                         e.data(), &qdummy, 1);
  if (info != 0) throw NumericalError("dsbtrd failed on " + tag + " (info=" + std::to_string(info) + ")");
  return tridiagonal_spectral_measure(d, e.head(std::max<Eigen::Index>(n - 1, 0)), tag);
}

Eigen::VectorXcd spmv(const SparseMatrix& a, const Eigen::VectorXcd& v) {
  Eigen::VectorXcd out(a.rows());
  out.real() = a * v.real();
  out.imag() = a * v.imag();
  return out;
}

namespace {

// One Lanczos exponential step; returns false if the error estimate did not
// reach the tolerance within the allowed dimension.
bool lanczos_step(const SparseMatrix& a, const Eigen::VectorXcd& v, double t, const KrylovOptions& opts,
                  Eigen::VectorXcd& out) {
  const double beta0 = v.norm();
  if (beta0 == 0.0) {
    out = v;
    return true;
  }
  const int mmax = std::min<int>(opts.max_dimension, int(v.size()));
  std::vector<Eigen::VectorXcd> basis;
  basis.reserve(std::size_t(mmax));
  basis.push_back(v / beta0);
  std::vector<double> alpha, beta;
  for (int j = 0; j < mmax; ++j) {
    Eigen::VectorXcd w = spmv(a, basis[std::size_t(j)]);
    alpha.push_back(basis[std::size_t(j)].dot(w).real());
    // Full reorthogonalisation, twice.
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : basis) w -= q * q.dot(w);
    const double b = w.norm();

    const int m = j + 1;
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
    for (int k = 0; k < m; ++k) T(k, k) = alpha[std::size_t(k)];
    for (int k = 0; k + 1 < m; ++k) T(k, k + 1) = T(k + 1, k) = beta[std::size_t(k)];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    const Eigen::VectorXd& lam = es.eigenvalues();
    const Eigen::MatrixXd& U = es.eigenvectors();
    Eigen::VectorXcd y(m);
    for (int r = 0; r < m; ++r) {
      std::complex<double> acc = 0;
      for (int k = 0; k < m; ++k) acc += U(r, k) * std::exp(std::complex<double>(0, -t * lam[k])) * U(0, k);
      y[r] = acc;
    }
    const bool breakdown = b < 1e-13;
    const double err = b * std::abs(y[m - 1]);
    if (breakdown || err < opts.tolerance || m == int(v.size())) {
      out = Eigen::VectorXcd::Zero(v.size());
      for (int r = 0; r < m; ++r) out += basis[std::size_t(r)] * y[r];
      out *= beta0;
      return true;
    }
    beta.push_back(b);
    basis.push_back(w / b);
  }
  return false;
}

}  // namespace

Eigen::VectorXcd krylov_expm(const SparseMatrix& a, const Eigen::VectorXcd& v, double t, const KrylovOptions& opts) {
  if (t == 0.0) return v;
  Eigen::VectorXcd out;
  if (lanczos_step(a, v, t, opts, out)) return out;
  int pieces = 2;
  for (int depth = 0; depth < 20; ++depth, pieces *= 2) {
    Eigen::VectorXcd cur = v;
    bool ok = true;
    for (int p = 0; p < pieces && ok; ++p) {
      ok = lanczos_step(a, cur, t / pieces, opts, out);
      cur = out;
    }
    if (ok) return cur;
  }
  throw NumericalError("Krylov exponential did not converge (t=" + std::to_string(t) + ")");
}

}  // namespace scarlab::linalg
