#pragma once

// Phase-space regions for the scarring picture on the phi = 0 section: a tube
// around the Neel orbit of the transformed flow and the four corner squares.

#include <algorithm>
#include <cmath>
#include <vector>

#include "scarlab/quasimodes.hpp"
#include "scarlab/tdvp_frame.hpp"

namespace regions {

enum Region { other = 0, orbit = 1, corner = 2 };

struct Grid {
  std::vector<double> axis;
  std::vector<std::vector<Region>> mask;  // [i][j] follows axis[i], axis[j]
};

// Distance to the curve after folding it back into the section, using
// (theta_a + 2 pi, theta_b) ~ (theta_a, -theta_b).
inline double distance_to_curve(double a, double b, const scarlab::frame::IntegralCurve& c) {
  double best = 1e300;
  for (std::size_t t = 0; t < c.t.size(); ++t)
    for (int k1 = -2; k1 <= 2; ++k1)
      for (int k2 = -2; k2 <= 2; ++k2) {
        double y1 = c.theta1[t] + 2 * M_PI * k1, y2 = c.theta2[t];
        if (k1 % 2) y2 = -y2;
        y2 += 2 * M_PI * k2;
        if (k2 % 2) y1 = -y1;
        best = std::min(best, std::hypot(a - y1, b - y2));
      }
  return best;
}

inline Grid build(int N, int points = 101, double tube = 0.25, double corner_width = 0.6) {
  using namespace scarlab::frame;
  const IntegralCurve c = integrate_flow(FlowField(N, FlowMode::transformed), M_PI - 1e-3, 1e-3, 0.01, 4.9);
  Grid g{section_axis(points), {}};
  g.mask.assign(std::size_t(points), std::vector<Region>(std::size_t(points), other));
  for (int i = 0; i < points; ++i)
    for (int j = 0; j < points; ++j) {
      const double a = g.axis[std::size_t(i)], b = g.axis[std::size_t(j)];
      if (distance_to_curve(a, b, c) < tube)
        g.mask[std::size_t(i)][std::size_t(j)] = orbit;
      else if (std::abs(a) > M_PI - corner_width && std::abs(b) > M_PI - corner_width)
        g.mask[std::size_t(i)][std::size_t(j)] = corner;
    }
  return g;
}

// Top-band mode nearest E = 0 outside the degenerate zero manifold, and the
// bulk mode nearest to it in energy.
inline std::pair<std::size_t, std::size_t> pick_modes(const scarlab::QuasimodeSet& qs) {
  std::size_t top = qs.size(), bulk = qs.size();
  for (auto k : qs.members(scarlab::Band::top)) {
    const double e = std::abs(qs.energies[Eigen::Index(k)]);
    if (e > 1e-8 && (top == qs.size() || e < std::abs(qs.energies[Eigen::Index(top)]))) top = k;
  }
  const double et = qs.energies[Eigen::Index(top)];
  for (auto k : qs.members(scarlab::Band::bulk))
    if (bulk == qs.size() || std::abs(qs.energies[Eigen::Index(k)] - et) < std::abs(qs.energies[Eigen::Index(bulk)] - et))
      bulk = k;
  return {top, bulk};
}

struct Weights {
  double mass[3] = {0, 0, 0};  // sum of |psi|^2 mu over the region
  double peak[3] = {0, 0, 0};  // max |psi|
};

inline Weights measure(const scarlab::QuasimodeSet& qs, std::size_t mode, const Grid& g,
                       const scarlab::frame::FrameDiagonal& fd) {
  const scarlab::SymVector v{qs.basis, qs.vectors.col(Eigen::Index(mode)).cast<std::complex<double>>()};
  const Eigen::MatrixXcd W = scarlab::frame::wavefunction(v, fd, g.axis, g.axis);
  Weights w;
  const int N = qs.basis->N();
  for (std::size_t i = 0; i < g.axis.size(); ++i)
    for (std::size_t j = 0; j < g.axis.size(); ++j) {
      const int r = g.mask[i][j];
      const double a = std::abs(W(Eigen::Index(i), Eigen::Index(j)));
      w.peak[r] = std::max(w.peak[r], a);
      w.mass[r] += a * a * scarlab::frame::mu_density(N, g.axis[i], g.axis[j]);
    }
  return w;
}

}  // namespace regions
