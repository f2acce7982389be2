#include "scarlab/tdvp_frame.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

#include "scarlab/error.hpp"
#include "scarlab/linalg.hpp"

namespace scarlab::frame {

namespace {

using cd = std::complex<double>;

// x^k with 0^0 = 1.
double pw(double x, int k) { return k == 0 ? 1.0 : std::pow(x, k); }

cd minus_i_pow(int n) {
  static const cd table[4] = {cd(1, 0), cd(0, -1), cd(-1, 0), cd(0, 1)};
  return table[n % 4];
}

std::vector<double> sqrt_class_sizes(const SymBasis& basis) {
  std::vector<double> out(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const Label l = basis.label(i);
    out[i] = std::exp(0.5 * basis.class_sizes().at(l.n1, l.n2).log);
  }
  return out;
}

struct Section {
  Eigen::VectorXcd psi, d1, d2;
};

// Coherent vector on the phi = 0 section and its two theta derivatives.
Section section_state(const SymBasis& basis, const std::vector<double>& root, double th1, double th2) {
  const int M = basis.half();
  const double s1 = std::sin(th1 / 2), c1 = std::cos(th1 / 2);
  const double s2 = std::sin(th2 / 2), c2 = std::cos(th2 / 2);
  Section out;
  const auto d = Eigen::Index(basis.size());
  out.psi.resize(d);
  out.d1.resize(d);
  out.d2.resize(d);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const Label l = basis.label(i);
    const int m = M - l.total();
    const double g1 = pw(s1, l.n1) * pw(c1, m), g2 = pw(s2, l.n2) * pw(c2, m);
    auto dg = [m](int n, double s, double c) {
      double v = 0.0;
      if (n > 0) v += n * pw(s, n - 1) * pw(c, m + 1);
      if (m > 0) v -= m * pw(s, n + 1) * pw(c, m - 1);
      return 0.5 * v;
    };
    const cd pre = root[i] * minus_i_pow(l.total());
    out.psi[Eigen::Index(i)] = pre * (g1 * g2);
    out.d1[Eigen::Index(i)] = pre * (dg(l.n1, s1, c1) * g2);
    out.d2[Eigen::Index(i)] = pre * (g1 * dg(l.n2, s2, c2));
  }
  return out;
}

// Powers of sin^2(theta/2) = (1 - x)/2 and cos^2(theta/2) = (1 + x)/2 at one
// quadrature node x = cos(theta).
struct PowerTable {
  std::vector<double> s, c;
  PowerTable(double x, int M) : s(std::size_t(M + 1)), c(std::size_t(M + 1)) {
    s[0] = c[0] = 1.0;
    for (int k = 1; k <= M; ++k) {
      s[std::size_t(k)] = s[std::size_t(k - 1)] * 0.5 * (1 - x);
      c[std::size_t(k)] = c[std::size_t(k - 1)] * 0.5 * (1 + x);
    }
  }
};

// |coefficient|^2 per label at the node pair (x1, x2).
void weights_at(const SymBasis& basis, const std::vector<double>& root, const PowerTable& t1, const PowerTable& t2,
                Eigen::VectorXd& w) {
  const int M = basis.half();
  w.resize(Eigen::Index(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const Label l = basis.label(i);
    const auto m = std::size_t(M - l.total());
    w[Eigen::Index(i)] = root[i] * root[i] * t1.s[std::size_t(l.n1)] * t2.s[std::size_t(l.n2)] * t1.c[m] * t2.c[m];
  }
}

std::vector<PowerTable> power_tables(const std::vector<double>& x, int M) {
  std::vector<PowerTable> out;
  for (double xi : x) out.emplace_back(xi, M);
  return out;
}

struct Gauss {
  std::vector<double> x, w;
};

// Gauss-Legendre on [-1, 1] from the Jacobi matrix.
Gauss gauss_legendre(int order) {
  require(order >= 1, "quadrature order must be positive");
  Eigen::VectorXd d = Eigen::VectorXd::Zero(order), e(std::max(order - 1, 0));
  for (int k = 1; k < order; ++k) e[k - 1] = k / std::sqrt(4.0 * k * k - 1.0);
  const auto m = linalg::tridiagonal_spectral_measure(d, e, "Gauss-Legendre");
  Gauss g;
  for (int k = 0; k < order; ++k) {
    g.x.push_back(m.values[k]);
    g.w.push_back(2.0 * m.weights[k]);
  }
  return g;
}

}  // namespace

bool CoherentPoint::degenerate() const {
  return std::abs(std::abs(theta1) - M_PI) < 1e-12 && std::abs(std::abs(theta2) - M_PI) < 1e-12;
}

SymVector coherent_in_K(const CoherentPoint& p, const BasisPtr& basis) {
  const int M = basis->half();
  const cd b1 = cd(0, -1) * std::exp(cd(0, p.phi1)) * std::sin(p.theta1 / 2);
  const cd b2 = cd(0, -1) * std::exp(cd(0, p.phi2)) * std::sin(p.theta2 / 2);
  const double cc = std::cos(p.theta1 / 2) * std::cos(p.theta2 / 2);
  const auto root = sqrt_class_sizes(*basis);
  SymVector v = SymVector::zero(basis);
  for (std::size_t i = 0; i < basis->size(); ++i) {
    const Label l = basis->label(i);
    cd c = root[i] * pw(cc, M - l.total());
    if (l.n1) c *= std::pow(b1, l.n1);
    if (l.n2) c *= std::pow(b2, l.n2);
    v.coeffs[Eigen::Index(i)] = c;
  }
  return v;
}

double frame_entry(int N, int n1, int n2) {
  const int M = N / 2;
  const int n = n1 + n2;
  auto rising3 = [](double x) { return x * (x + 1) * (x + 2); };
  const double m = M - n;
  // On the Neel labels the zero line M - n meets the pole line M - n_a; the
  // ratio is 1 there.
  double ratio;
  double den;
  if (n1 == M || n2 == M) {
    ratio = 1.0;
    den = 2.0 * rising3(M);
  } else {
    ratio = m;
    den = rising3(M - n1) * rising3(M - n2);
  }
  return M * (M + 1.0) * (M + 1.0) * ratio * (m + 1) * (m + 1) / den;
}

Eigen::VectorXd FrameDiagonal::power(double p) const {
  Eigen::VectorXd out(values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i) out[i] = std::pow(values[i] + eps, p);
  return out;
}

FrameDiagonal frame_diagonal(const BasisPtr& basis, double eps) {
  require(eps >= 0.0, "regulariser must be non-negative");
  FrameDiagonal fd;
  fd.basis = basis;
  fd.eps = eps;
  fd.values.resize(Eigen::Index(basis->size()));
  for (std::size_t i = 0; i < basis->size(); ++i) {
    const Label l = basis->label(i);
    fd.values[Eigen::Index(i)] = frame_entry(basis->N(), l.n1, l.n2);
  }
  return fd;
}

double default_epsilon(const FrameDiagonal& fd) {
  const double mx = fd.values.maxCoeff();
  return fd.values.minCoeff() < 1e-14 ? 1e-12 * mx : 0.0;
}

SymVector frame_transform(const SymVector& state, const FrameDiagonal& fd, double power) {
  require_same_basis(state.basis, fd.basis);
  require(power == -0.5 || power == -1.0 || power == 0.5, "frame transform power must be -1/2, -1 or 1/2");
  if (power < 0 && fd.eps == 0.0 && fd.values.minCoeff() < 1e-14)
    throw ValidationError("frame operator has a vanishing entry; set a positive regulariser");
  return {state.basis, fd.power(power).cast<cd>().cwiseProduct(state.coeffs)};
}

double mu_density(int N, double theta1, double theta2) {
  const double k = (N / 2 + 1.0) / (4 * M_PI);
  auto f = [](double th) { return std::abs(std::sin(th)) * std::pow(std::cos(th / 2), 2); };
  return k * k * f(theta1) * f(theta2);
}

namespace {
struct Expect {
  double norm2, s_half, s_inv, transformed_norm2;
};
Expect expectations(const SymVector& psi, const FrameDiagonal& fd) {
  const Eigen::VectorXd a = psi.coeffs.cwiseAbs2();
  const Eigen::VectorXd h = fd.power(-0.5);
  Expect e;
  e.norm2 = a.sum();
  e.s_half = a.dot(h);
  e.s_inv = a.dot(h.cwiseAbs2());
  e.transformed_norm2 = e.s_inv;
  return e;
}
}  // namespace

double nu_factor(const CoherentPoint& p, const FrameDiagonal& fd) {
  const Expect e = expectations(coherent_in_K(p, fd.basis), fd);
  const double r = e.s_half / e.norm2;
  return r * r;
}

Eigen::MatrixXcd wavefunction(const SymVector& state, const FrameDiagonal& fd, const std::vector<double>& theta1,
                              const std::vector<double>& theta2) {
  require_same_basis(state.basis, fd.basis);
  const Eigen::VectorXcd t = frame_transform(state, fd, -0.5).coeffs;
  Eigen::MatrixXcd out(Eigen::Index(theta1.size()), Eigen::Index(theta2.size()));
  for (std::size_t i = 0; i < theta1.size(); ++i)
    for (std::size_t j = 0; j < theta2.size(); ++j) {
      const SymVector c = coherent_in_K({theta1[i], 0.0, theta2[j], 0.0}, fd.basis);
      out(Eigen::Index(i), Eigen::Index(j)) = c.coeffs.dot(t);
    }
  return out;
}

std::vector<double> section_axis(int k, double margin) {
  require(k >= 2, "grid needs at least two points per axis");
  std::vector<double> out;
  const double lo = -M_PI + margin, hi = M_PI - margin;
  for (int i = 0; i < k; ++i) out.push_back(lo + (hi - lo) * i / (k - 1));
  return out;
}

double fubini_study(const CoherentPoint& p, const FrameDiagonal& fd) {
  const Expect e = expectations(coherent_in_K(p, fd.basis), fd);
  if (e.norm2 < 1e-300) throw NumericalError("coherent state vanishes at this point");
  const double c = e.s_half / std::sqrt(e.norm2 * e.transformed_norm2);
  return std::acos(std::clamp(c, 0.0, 1.0));
}

double transform_variance(const CoherentPoint& p, const FrameDiagonal& fd) {
  const Expect e = expectations(coherent_in_K(p, fd.basis), fd);
  if (e.norm2 < 1e-300) throw NumericalError("coherent state vanishes at this point");
  const double m = e.s_half / e.norm2;
  return std::max(0.0, e.s_inv / e.norm2 - m * m);
}

double averaged_fubini_study(int N, int order) {
  auto basis = SymBasis::build(N);
  const FrameDiagonal fd = frame_diagonal(basis, 0.0);
  const Eigen::VectorXd h = fd.power(-0.5);
  const auto root = sqrt_class_sizes(*basis);
  const Gauss g = gauss_legendre(order > 0 ? order : 2 * N);
  const auto tables = power_tables(g.x, basis->half());
  Eigen::VectorXd a;
  double num = 0, den = 0;
  for (std::size_t i = 0; i < g.x.size(); ++i)
    for (std::size_t j = 0; j < g.x.size(); ++j) {
      const double wq = g.w[i] * g.w[j] * 0.25 * (1 + g.x[i]) * (1 + g.x[j]);
      weights_at(*basis, root, tables[i], tables[j], a);
      const double n2 = a.sum();
      if (n2 < 1e-300) continue;
      const double c = a.dot(h) / std::sqrt(n2 * a.dot(h.cwiseAbs2()));
      num += wq * std::acos(std::clamp(c, 0.0, 1.0));
      den += wq;
    }
  return num / den;
}

Eigen::MatrixXcd frame_operator_quadrature(int N, int theta_order, int phi_points) {
  auto basis = SymBasis::build(N);
  const Gauss g = gauss_legendre(theta_order);
  const double k = (N / 2 + 1.0) / (4 * M_PI);
  const double wphi = 2 * M_PI / phi_points;
  const auto d = Eigen::Index(basis->size());
  Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(d, d);
  for (std::size_t i = 0; i < g.x.size(); ++i)
    for (std::size_t j = 0; j < g.x.size(); ++j)
      for (int a = 0; a < phi_points; ++a)
        for (int b = 0; b < phi_points; ++b) {
          const CoherentPoint p{std::acos(g.x[i]), -M_PI + a * wphi, std::acos(g.x[j]), -M_PI + b * wphi};
          const Eigen::VectorXcd v = coherent_in_K(p, basis).coeffs;
          const double w = k * k * g.w[i] * g.w[j] * 0.25 * (1 + g.x[i]) * (1 + g.x[j]) * wphi * wphi;
          S.noalias() += w * v * v.adjoint();
        }
  return S;
}

FlowField::FlowField(int N, FlowMode mode)
    : basis_(SymBasis::build(N)), H_(build_hamiltonian(basis_)), mode_(mode), root_(sqrt_class_sizes(*basis_)) {
  if (mode == FlowMode::transformed) {
    const FrameDiagonal fd = frame_diagonal(basis_, 0.0);
    FrameDiagonal reg = fd;
    reg.eps = default_epsilon(fd);
    weight_ = reg.power(-0.5);
  } else {
    weight_ = Eigen::VectorXd::Ones(Eigen::Index(basis_->size()));
  }
}

FlowVector FlowField::at(double theta1, double theta2) const {
  const Section s = section_state(*basis_, root_, theta1, theta2);
  const Eigen::VectorXcd w = weight_.cast<cd>();
  const Eigen::VectorXcd psi = w.cwiseProduct(s.psi);
  const double nrm = psi.norm();
  if (nrm < 1e-300) throw NumericalError("variational state vanishes at this point");
  const Eigen::VectorXcd hat = psi / nrm;
  const Eigen::VectorXcd hpsi = H_.apply(psi);
  Eigen::VectorXcd u[2] = {w.cwiseProduct(s.d1), w.cwiseProduct(s.d2)};
  for (auto& x : u) x -= hat * hat.dot(x);
  Eigen::Matrix2d G;
  Eigen::Vector2d f;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) G(a, b) = u[a].dot(u[b]).real();
    f[a] = u[a].dot(hpsi).imag();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(G);
  const Eigen::Vector2d lam = es.eigenvalues();
  const double gmax = std::max(std::abs(lam[0]), std::abs(lam[1]));
  const double cut = 1e-10 * gmax;
  FlowVector out;
  Eigen::Vector2d v = Eigen::Vector2d::Zero();
  for (int k = 0; k < 2; ++k) {
    if (lam[k] > cut) {
      const Eigen::Vector2d q = es.eigenvectors().col(k);
      v += q * (q.dot(f) / lam[k]);
    } else {
      out.near_singular = true;
    }
  }
  out.condition = lam[0] > 0 ? lam[1] / lam[0] : std::numeric_limits<double>::infinity();
  out.dtheta1 = v[0];
  out.dtheta2 = v[1];
  return out;
}

IntegralCurve integrate_flow(const FlowField& field, double theta1, double theta2, double dt, double t_max) {
  require(dt > 0 && t_max > 0, "step and duration must be positive");
  IntegralCurve c;
  Eigen::Vector2d y(theta1, theta2);
  auto rhs = [&](const Eigen::Vector2d& p) {
    const FlowVector v = field.at(p[0], p[1]);
    return Eigen::Vector2d(v.dtheta1, v.dtheta2);
  };
  const long steps = long(std::ceil(t_max / dt - 1e-9));
  c.t.push_back(0);
  c.theta1.push_back(y[0]);
  c.theta2.push_back(y[1]);
  for (long k = 0; k < steps; ++k) {
    const Eigen::Vector2d k1 = rhs(y);
    const Eigen::Vector2d k2 = rhs(y + 0.5 * dt * k1);
    const Eigen::Vector2d k3 = rhs(y + 0.5 * dt * k2);
    const Eigen::Vector2d k4 = rhs(y + dt * k3);
    y += dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    c.t.push_back(double(k + 1) * dt);
    c.theta1.push_back(y[0]);
    c.theta2.push_back(y[1]);
  }
  return c;
}

namespace {
// Distance on the section, where theta_a -> theta_a + 2 pi together with
// theta_b -> -theta_b gives the same ray.
double section_distance(double a1, double a2, double b1, double b2) {
  double best = std::numeric_limits<double>::infinity();
  for (int k1 = -2; k1 <= 2; ++k1)
    for (int k2 = -2; k2 <= 2; ++k2) {
      double x1 = b1, x2 = b2;
      x1 += 2 * M_PI * k1;
      if (k1 % 2) x2 = -x2;
      x2 += 2 * M_PI * k2;
      if (k2 % 2) x1 = -x1;
      best = std::min(best, std::hypot(a1 - x1, a2 - x2));
    }
  return best;
}
}  // namespace

Closure closure(const IntegralCurve& curve, double leave) {
  Closure out;
  out.distance = std::numeric_limits<double>::infinity();
  std::vector<double> d(curve.t.size());
  for (std::size_t k = 0; k < d.size(); ++k)
    d[k] = section_distance(curve.theta1[0], curve.theta2[0], curve.theta1[k], curve.theta2[k]);
  std::size_t k = 1;
  while (k < d.size() && d[k] <= leave) ++k;
  for (; k < d.size(); ++k) {
    if (d[k] < out.distance) {
      out.distance = d[k];
      out.period = curve.t[k];
    }
    // First local minimum back inside the leave radius.
    if (d[k] < leave && k + 1 < d.size() && d[k + 1] > d[k]) {
      out.returned = true;
      break;
    }
  }
  return out;
}

double cosine_similarity(const FlowVector& a, const FlowVector& b) {
  const double na = std::hypot(a.dtheta1, a.dtheta2), nb = std::hypot(b.dtheta1, b.dtheta2);
  if (na == 0 || nb == 0) return na == nb ? 1.0 : 0.0;
  return (a.dtheta1 * b.dtheta1 + a.dtheta2 * b.dtheta2) / (na * nb);
}

namespace {
double resolution_deviation(const SymBasis& basis, const Eigen::VectorXd& h, const std::vector<double>& root,
                            int order) {
  const int M = basis.half();
  const Gauss g = gauss_legendre(order);
  const auto tables = power_tables(g.x, M);
  Eigen::VectorXd s_nu = Eigen::VectorXd::Zero(Eigen::Index(basis.size()));
  Eigen::VectorXd a;
  const double k = 0.5 * (M + 1.0);
  for (std::size_t i = 0; i < g.x.size(); ++i)
    for (std::size_t j = 0; j < g.x.size(); ++j) {
      weights_at(basis, root, tables[i], tables[j], a);
      const double n2 = a.sum();
      if (n2 < 1e-300) continue;
      const double r = a.dot(h) / n2;
      s_nu += (k * k * g.w[i] * g.w[j] * 0.25 * (1 + g.x[i]) * (1 + g.x[j]) * r * r) * a;
    }
  double dev = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i)
    if (M - basis.label(i).total() > 2) dev = std::max(dev, std::abs(s_nu[Eigen::Index(i)] - 1.0));
  return dev;
}
}  // namespace

double resolution_check(int N, int order) {
  require(N <= 40, "resolution check supports N <= 40");
  auto basis = SymBasis::build(N);
  const FrameDiagonal fd = frame_diagonal(basis, 0.0);
  const Eigen::VectorXd h = fd.power(-0.5);
  const auto root = sqrt_class_sizes(*basis);
  const int q = order > 0 ? order : 2 * N;
  const double d1 = resolution_deviation(*basis, h, root, q);
  const double d2 = resolution_deviation(*basis, h, root, 2 * q);
  if (std::abs(d1 - d2) > 1e-6)
    throw NumericalError("resolution quadrature not converged (order " + std::to_string(q) + ": " +
                         std::to_string(d1) + ", order " + std::to_string(2 * q) + ": " + std::to_string(d2) + ")");
  return d2;
}

}  // namespace scarlab::frame
