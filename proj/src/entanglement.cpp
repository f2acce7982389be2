#include "scarlab/entanglement.hpp"

#include <Eigen/SVD>
#include <cmath>

#include "scarlab/error.hpp"

namespace scarlab {

namespace {

struct Side {
  std::vector<BoundaryClass> classes;
  std::vector<double> log_gamma;  // ln sqrt(count)
};

Side boundary_classes(int n_sites) {
  const ClassTable t = ClassTable::build(n_sites, Boundary::open);
  const int M = n_sites / 2;
  Side s;
  for (int n1 = 0; n1 <= M; ++n1)
    for (int n2 = 0; n2 <= M; ++n2)
      for (int a = 0; a <= 1; ++a)
        for (int b = 0; b <= 1; ++b) {
          const Count& c = t.at(n1, n2, a, b);
          if (c.zero) continue;
          s.classes.push_back({n1, n2, a, b});
          s.log_gamma.push_back(0.5 * c.log);
        }
  return s;
}

}  // namespace

SchmidtDecomposition schmidt(const SymVector& state, int N_L) {
  const SymBasis& basis = *state.basis;
  const int N = basis.N();
  const int N_R = N - N_L;
  if (N_L <= 0 || N_R <= 0 || N_L % 2 || N_R % 2)
    throw ValidationError("cut sizes must be positive and even, got " + std::to_string(N_L) + "+" + std::to_string(N_R));
  SchmidtDecomposition sd;
  sd.N_L = N_L;
  sd.N_R = N_R;
  const Side L = boundary_classes(N_L);
  const Side R = N_R == N_L ? L : boundary_classes(N_R);
  sd.left = L.classes;
  sd.right = R.classes;
  sd.alpha = Eigen::MatrixXcd::Zero(Eigen::Index(L.classes.size()), Eigen::Index(R.classes.size()));
  const ClassTable& full = basis.class_sizes();
  for (std::size_t i = 0; i < L.classes.size(); ++i) {
    const BoundaryClass& l = L.classes[i];
    for (std::size_t j = 0; j < R.classes.size(); ++j) {
      const BoundaryClass& r = R.classes[j];
      // Neighbouring end sites across either cut may not both be excited.
      if ((l.last && r.first) || (r.last && l.first)) continue;
      const Label lab{l.n1 + r.n1, l.n2 + r.n2};
      if (!basis.contains(lab)) continue;
      const std::complex<double> c = state.coeffs[Eigen::Index(basis.index(lab))];
      if (c == 0.0) continue;
      const double lg = L.log_gamma[i] + R.log_gamma[j] - 0.5 * full.at(lab.n1, lab.n2).log;
      sd.alpha(Eigen::Index(i), Eigen::Index(j)) = c * std::exp(lg);
    }
  }
  const Eigen::VectorXd sv = Eigen::BDCSVD<Eigen::MatrixXcd>(sd.alpha).singularValues();
  Eigen::Index keep = 0;
  while (keep < sv.size() && sv[keep] >= 1e-14) ++keep;
  sd.singular_values = sv.head(keep);
  return sd;
}

SchmidtDecomposition schmidt(const SymVector& state) {
  const int N = state.basis->N();
  if (N % 4) throw ValidationError("the symmetric cut needs N divisible by 4, got " + std::to_string(N));
  return schmidt(state, N / 2);
}

namespace {
double von_neumann(const Eigen::VectorXd& sv) {
  double s = 0.0;
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    const double p = sv[k] * sv[k];
    if (p > 0) s -= p * std::log(p);
  }
  return std::max(s, 0.0);
}
}  // namespace

double entropy(const SymVector& state, int N_L) { return von_neumann(schmidt(state, N_L).singular_values); }
double entropy(const SymVector& state) { return von_neumann(schmidt(state).singular_values); }

}  // namespace scarlab
