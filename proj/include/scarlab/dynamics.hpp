#pragma once

// Quench dynamics inside K: spectral or Krylov evolution, revival and
// transfer fidelities, extrema, observables.

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "scarlab/quasimodes.hpp"
#include "scarlab/symspace.hpp"

namespace scarlab {

// Exact spectral evolution; needs eigenvectors.
SymVector evolve(const SymVector& psi0, double t, const QuasimodeSet& qs);

// Uniform grid 0, dt, ..., up to and including t_max (within rounding).
std::vector<double> time_grid(double t_max, double dt);

struct FidelitySeries {
  std::vector<double> t;
  std::vector<double> f_rev;    // |<Z2|psi(t)>|^2
  std::vector<double> f_trans;  // |<Z2bar|psi(t)>|^2
};

// From energies, overlaps and parities only: the Neel amplitude splits into
// an even and an odd block return amplitude and f_trans = |(A_e - A_o)/2|^2.
FidelitySeries fidelity_series(const QuasimodeSet& qs, double t_max, double dt);
// Krylov propagation of the Neel state in K; works for any N.
FidelitySeries fidelity_series_krylov(const SymOperator& H, double t_max, double dt);
// Chooses spectral for dim K up to `dense_limit`, Krylov beyond.
FidelitySeries fidelity_series(int N, double t_max, double dt, std::size_t dense_limit = 5000);

struct Extremum {
  double t = 0.0;
  double value = 0.0;
  bool edge = false;  // discrete maximum on the window boundary, or flat series
};

// Maximum of series over the open window (lo, hi), refined by a parabola
// through the discrete argmax and its neighbours.
Extremum find_extrema(const std::vector<double>& t, const std::vector<double>& y, double lo, double hi);

struct ScarTimes {
  Extremum transfer;  // first state transfer, 1 < t < 4
  Extremum revival;   // first revival, 3 < t < 6
};
ScarTimes scar_times(const FidelitySeries& fs);

struct Trajectory {
  std::vector<double> t;
  std::vector<SymVector> states;
};

// psi(t) on the grid, spectral when qs carries vectors, Krylov otherwise.
Trajectory trajectory(const SymVector& psi0, const SymOperator& H, double t_max, double dt,
                      const QuasimodeSet* qs = nullptr);

std::vector<double> density_series(const Trajectory& traj);
std::vector<double> entropy_series(const Trajectory& traj);

// (1/N) ln |<a(t)|b(t)>|^2 for two families of states in a common space.
std::vector<double> comoving_fidelity_density(const std::vector<Eigen::VectorXcd>& a,
                                              const std::vector<Eigen::VectorXcd>& b, int N);

struct InverseNFit {
  double a = 0, b = 0;
  double r2 = 0;
  double se_a = 0, se_b = 0;  // standard errors
};
// Least squares y = a / N + b.
InverseNFit fit_inverse_n(const std::vector<double>& N, const std::vector<double>& y);

}  // namespace scarlab
