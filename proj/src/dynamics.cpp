#include "scarlab/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "scarlab/entanglement.hpp"
#include "scarlab/error.hpp"
#include "scarlab/linalg.hpp"

namespace scarlab {

SymVector evolve(const SymVector& psi0, double t, const QuasimodeSet& qs) {
  require_same_basis(psi0.basis, qs.basis);
  if (!qs.has_vectors()) throw ValidationError("spectral evolution needs eigenvectors");
  const Eigen::VectorXcd a = qs.vectors.transpose().cast<std::complex<double>>() * psi0.coeffs;
  Eigen::VectorXcd ph(a.size());
  for (Eigen::Index k = 0; k < a.size(); ++k) ph[k] = a[k] * std::exp(std::complex<double>(0, -qs.energies[k] * t));
  return {psi0.basis, qs.vectors.cast<std::complex<double>>() * ph};
}

std::vector<double> time_grid(double t_max, double dt) {
  require(t_max > 0.0, "t_max must be positive");
  require(dt > 0.0, "dt must be positive");
  const long n = long(std::floor(t_max / dt + 1e-9));
  std::vector<double> t(std::size_t(n + 1));
  for (long k = 0; k <= n; ++k) t[std::size_t(k)] = double(k) * dt;
  return t;
}

FidelitySeries fidelity_series(const QuasimodeSet& qs, double t_max, double dt) {
  FidelitySeries fs;
  fs.t = time_grid(t_max, dt);
  for (double t : fs.t) {
    std::complex<double> ae = 0, ao = 0;
    for (std::size_t k = 0; k < qs.size(); ++k) {
      const std::complex<double> p =
          2.0 * qs.neel_overlap[Eigen::Index(k)] * std::exp(std::complex<double>(0, -qs.energies[Eigen::Index(k)] * t));
      (qs.parity[k] == Parity::even ? ae : ao) += p;
    }
    fs.f_rev.push_back(std::norm(0.5 * (ae + ao)));
    fs.f_trans.push_back(std::norm(0.5 * (ae - ao)));
  }
  return fs;
}

FidelitySeries fidelity_series_krylov(const SymOperator& H, double t_max, double dt) {
  const BasisPtr& basis = H.basis();
  FidelitySeries fs;
  fs.t = time_grid(t_max, dt);
  const std::size_t in = basis->index(basis->neel());
  const std::size_t ia = basis->index(basis->anti_neel());
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(Eigen::Index(basis->size()));
  psi[Eigen::Index(in)] = 1.0;
  for (std::size_t k = 0; k < fs.t.size(); ++k) {
    if (k > 0) psi = linalg::krylov_expm(H.sparse(), psi, fs.t[k] - fs.t[k - 1]);
    fs.f_rev.push_back(std::norm(psi[Eigen::Index(in)]));
    fs.f_trans.push_back(std::norm(psi[Eigen::Index(ia)]));
  }
  return fs;
}

FidelitySeries fidelity_series(int N, double t_max, double dt, std::size_t dense_limit) {
  auto basis = SymBasis::build(N);
  const SymOperator H = build_hamiltonian(basis);
  if (basis->size() <= dense_limit) return fidelity_series(diagonalize(H), t_max, dt);
  return fidelity_series_krylov(H, t_max, dt);
}

Extremum find_extrema(const std::vector<double>& t, const std::vector<double>& y, double lo, double hi) {
  require(t.size() == y.size(), "series and time grid differ in length");
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < t.size(); ++k)
    if (t[k] > lo && t[k] < hi) idx.push_back(k);
  if (idx.empty()) throw ValidationError("no samples inside the window");
  std::size_t best = idx.front();
  double ymin = y[best];
  for (auto k : idx) {
    if (y[k] > y[best]) best = k;
    ymin = std::min(ymin, y[k]);
  }
  Extremum ex;
  if (y[best] - ymin <= 1e-14 * std::max(1.0, std::abs(y[best]))) {
    const std::size_t mid = idx[idx.size() / 2];
    ex.t = 0.5 * (lo + hi);
    ex.value = y[mid];
    ex.edge = true;
    return ex;
  }
  if (best == idx.front() || best == idx.back()) {
    ex.t = t[best];
    ex.value = y[best];
    ex.edge = true;
    return ex;
  }
  const double ym = y[best - 1], y0 = y[best], yp = y[best + 1];
  const double h = 0.5 * (t[best + 1] - t[best - 1]);
  const double den = ym - 2.0 * y0 + yp;
  const double delta = den != 0.0 ? 0.5 * (ym - yp) / den : 0.0;
  ex.t = t[best] + delta * h;
  ex.value = y0 - 0.25 * (ym - yp) * delta;
  return ex;
}

ScarTimes scar_times(const FidelitySeries& fs) {
  return {find_extrema(fs.t, fs.f_trans, 1.0, 4.0), find_extrema(fs.t, fs.f_rev, 3.0, 6.0)};
}

Trajectory trajectory(const SymVector& psi0, const SymOperator& H, double t_max, double dt, const QuasimodeSet* qs) {
  require_same_basis(psi0.basis, H.basis());
  Trajectory tr;
  tr.t = time_grid(t_max, dt);
  const bool spectral = qs && qs->has_vectors();
  for (std::size_t k = 0; k < tr.t.size(); ++k) {
    if (spectral) {
      tr.states.push_back(evolve(psi0, tr.t[k], *qs));
    } else if (k == 0) {
      tr.states.push_back(psi0);
    } else {
      tr.states.push_back({psi0.basis, linalg::krylov_expm(H.sparse(), tr.states.back().coeffs, tr.t[k] - tr.t[k - 1])});
    }
  }
  return tr;
}

std::vector<double> density_series(const Trajectory& traj) {
  std::vector<double> out;
  if (traj.states.empty()) return out;
  const Eigen::VectorXd d = density_diagonal(*traj.states.front().basis);
  for (const auto& s : traj.states) out.push_back(d.dot(s.coeffs.cwiseAbs2()) / s.norm2());
  return out;
}

std::vector<double> entropy_series(const Trajectory& traj) {
  std::vector<double> out;
  for (const auto& s : traj.states) out.push_back(entropy(s));
  return out;
}

std::vector<double> comoving_fidelity_density(const std::vector<Eigen::VectorXcd>& a,
                                              const std::vector<Eigen::VectorXcd>& b, int N) {
  require(a.size() == b.size(), "trajectories have different time grids");
  std::vector<double> out;
  for (std::size_t k = 0; k < a.size(); ++k) {
    require(a[k].size() == b[k].size(), "trajectories live in different spaces");
    const double f = std::norm(a[k].dot(b[k])) / (a[k].squaredNorm() * b[k].squaredNorm());
    out.push_back(std::min(0.0, std::log(f) / N));
  }
  return out;
}

InverseNFit fit_inverse_n(const std::vector<double>& N, const std::vector<double>& y) {
  require(N.size() == y.size() && N.size() >= 3, "fit needs at least three points");
  const double n = double(N.size());
  double sx = 0, sy = 0;
  for (std::size_t k = 0; k < N.size(); ++k) {
    sx += 1.0 / N[k];
    sy += y[k];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t k = 0; k < N.size(); ++k) {
    const double dx = 1.0 / N[k] - mx, dy = y[k] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  InverseNFit f;
  f.a = sxy / sxx;
  f.b = my - f.a * mx;
  double sse = 0;
  for (std::size_t k = 0; k < N.size(); ++k) {
    const double r = y[k] - (f.a / N[k] + f.b);
    sse += r * r;
  }
  f.r2 = syy > 0 ? 1.0 - sse / syy : 1.0;
  const double s2 = sse / (n - 2);
  f.se_a = std::sqrt(s2 / sxx);
  f.se_b = std::sqrt(s2 * (1.0 / n + mx * mx / sxx));
  return f;
}

}  // namespace scarlab
