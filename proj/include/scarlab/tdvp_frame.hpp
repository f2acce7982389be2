#pragma once

// The bond-dimension-2 coherent states inside K, the frame operator of the
// proxy measure mu, its transforms, phase-space wavefunctions, Fubini-Study
// diagnostics and the variational flow on the phi = 0 section.
//
// Excited sites carry b_j = -i e^{i phi_j} sin(theta_j/2), empty sites
// cos(theta_j/2) except the one following an excitation, which carries 1.
// The coefficient of label (n1, n2) is therefore
//   sqrt(#(n1,n2)) b_1^n1 b_2^n2 (cos(theta_1/2) cos(theta_2/2))^(N/2-n1-n2).
// Angles theta may range over [-pi, pi]; negative theta is the same state as
// |theta| with phi shifted by pi.

#include <Eigen/Dense>
#include <vector>

#include "scarlab/symspace.hpp"

namespace scarlab::frame {

struct CoherentPoint {
  double theta1 = 0, phi1 = 0, theta2 = 0, phi2 = 0;
  // Both sublattice angles at +-pi: only the two Neel labels survive.
  bool degenerate() const;
};

SymVector coherent_in_K(const CoherentPoint& p, const BasisPtr& basis);

// Closed-form diagonal of S_mu at one label (Neel corners by continuity).
double frame_entry(int N, int n1, int n2);

struct FrameDiagonal {
  BasisPtr basis;
  Eigen::VectorXd values;  // S_mu per label, without the regulariser
  double eps = 0.0;

  // (S_mu + eps)^power, elementwise.
  Eigen::VectorXd power(double p) const;
};

FrameDiagonal frame_diagonal(const BasisPtr& basis, double eps = 0.0);
// 1e-12 max(S_mu) when some entry is numerically zero, else 0.
double default_epsilon(const FrameDiagonal& fd);

// power is one of -1/2, -1, +1/2.
SymVector frame_transform(const SymVector& state, const FrameDiagonal& fd, double power);

// Density of mu with respect to dtheta1 dphi1 dtheta2 dphi2.
double mu_density(int N, double theta1, double theta2);
// (<Psi|S^-1/2|Psi> / <Psi|Psi>)^2, so dnu = nu_factor dmu.
double nu_factor(const CoherentPoint& p, const FrameDiagonal& fd);

// psi(theta1, theta2) = <Psi(theta, phi=0)|S^-1/2|state>; rows follow theta1.
Eigen::MatrixXcd wavefunction(const SymVector& state, const FrameDiagonal& fd, const std::vector<double>& theta1,
                              const std::vector<double>& theta2);

// Section grid over [-pi + margin, pi - margin], k points per axis.
std::vector<double> section_axis(int k, double margin = 1e-3);

// Angle between Psi and S^-1/2 Psi.
double fubini_study(const CoherentPoint& p, const FrameDiagonal& fd);
// <S^-1> - <S^-1/2>^2 in the normalised state.
double transform_variance(const CoherentPoint& p, const FrameDiagonal& fd);

// D_FS averaged against mu over theta in [0, pi]^2 (the phi integrals drop
// out); Gauss-Legendre in cos(theta) of the given order (default 2N).
double averaged_fubini_study(int N, int order = 0);

// Full quadrature of S_mu in K over the four angles: Gauss-Legendre in
// cos(theta), uniform in phi.
Eigen::MatrixXcd frame_operator_quadrature(int N, int theta_order, int phi_points);

enum class FlowMode { original, transformed };

struct FlowVector {
  double dtheta1 = 0, dtheta2 = 0;
  double condition = 0;        // of the 2x2 Gram matrix
  bool near_singular = false;  // a singular value fell below the cutoff
};

class FlowField {
 public:
  FlowField(int N, FlowMode mode);
  FlowVector at(double theta1, double theta2) const;
  int N() const { return basis_->N(); }
  FlowMode mode() const { return mode_; }

 private:
  BasisPtr basis_;
  SymOperator H_;
  FlowMode mode_;
  Eigen::VectorXd weight_;  // S^-1/2 or ones
  std::vector<double> root_;  // sqrt of class sizes
};

struct IntegralCurve {
  std::vector<double> t, theta1, theta2;
};

// Classical RK4 with fixed step, in unwrapped angles.
IntegralCurve integrate_flow(const FlowField& field, double theta1, double theta2, double dt, double t_max);

struct Closure {
  double period = 0;    // time of closest return
  double distance = 0;  // torus distance to the start there
  bool returned = false;
};
// First return to the start: once the curve has moved more than `leave`
// away, the first local minimum of the distance that lies back inside
// `leave`. Without one, the closest approach seen and returned = false.
Closure closure(const IntegralCurve& curve, double leave = 1.0);

double cosine_similarity(const FlowVector& a, const FlowVector& b);

// max |S_nu - 1| over labels with N/2 - n1 - n2 > 2, by tensor Gauss
// quadrature in cos(theta) of the given order (default 2N); NumericalError if
// doubling the order moves the result by more than 1e-6.
double resolution_check(int N, int order = 0);

}  // namespace scarlab::frame
