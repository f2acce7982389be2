// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "oracle.hpp"
#include "scar_regions.hpp"
#include "scarlab/combinatorics.hpp"
#include "scarlab/dynamics.hpp"
#include "scarlab/ed_oracle.hpp"
#include "scarlab/entanglement.hpp"
#include "scarlab/quasimodes.hpp"
#include "scarlab/symspace.hpp"
#include "scarlab/tdvp_frame.hpp"

using namespace scarlab;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

long exact_or_zero(const Count& c) { return c.zero ? 0 : long(*c.exact); }

SymVector random_sym(int N, std::mt19937& rng) {
  std::normal_distribution<double> g;
  SymVector v = SymVector::zero(SymBasis::build(N));
  for (Eigen::Index i = 0; i < v.coeffs.size(); ++i) v.coeffs[i] = {g(rng), g(rng)};
  v.coeffs.normalize();
  return v;
}

void c1(Outcome& o) {
  long bad = 0, checked = 0;
  for (int N = 2; N <= 16; N += 2) {
    for (bool periodic : {true, false}) {
      const auto ref = oracle::label_counts(N, periodic);
      for (int n1 = 0; n1 <= N / 2; ++n1)
        for (int n2 = 0; n2 <= N / 2; ++n2) {
          const auto it = ref.find({n1, n2});
          const long want = it == ref.end() ? 0 : it->second;
          bad += exact_or_zero(class_size(N, n1, n2, periodic ? Boundary::periodic : Boundary::open)) != want;
          ++checked;
        }
    }
    const auto ref = oracle::boundary_counts(N);
    for (int n1 = 0; n1 <= N / 2; ++n1)
      for (int n2 = 0; n2 <= N / 2; ++n2)
        for (int a = 0; a <= 1; ++a)
          for (int b = 0; b <= 1; ++b) {
            const auto it = ref.find({n1, n2, a, b});
            const long want = it == ref.end() ? 0 : it->second;
            bad += exact_or_zero(class_size_boundary(N, n1, n2, a, b)) != want;
            ++checked;
          }
  }
  o.detail << checked << " counts, " << bad << " mismatches";
  o.check(bad == 0, "count mismatch");
}

void c2(Outcome& o) {
  double worst = 0;
  for (int N : {8, 12, 16}) {
    const auto full = ed::enumerate_basis(N);
    const auto sym = SymBasis::build(N);
    const Eigen::MatrixXd P = Eigen::MatrixXd(ed::embedding_matrix(*full, *sym));
    const Eigen::MatrixXd ref = P.transpose() * Eigen::MatrixXd(ed::build_pxp(*full)) * P;
    worst = std::max(worst, (ref - build_hamiltonian(sym).dense()).cwiseAbs().maxCoeff());
  }
  o.detail << "max entry deviation " << worst;
  o.check(worst <= 1e-12, "deviation > 1e-12");
}

void c3(Outcome& o) {
  double a = 0;
  for (int N = 4; N <= 12; N += 2) {
    const auto full = ed::enumerate_basis(N);
    const auto sym = SymBasis::build(N);
    const Eigen::MatrixXd P = Eigen::MatrixXd(ed::embedding_matrix(*full, *sym));
    const Eigen::MatrixXd h = Eigen::MatrixXd(ed::build_pxp(*full));
    const Eigen::MatrixXd kh = P.transpose() * h * P;
    const Eigen::MatrixXd var = P.transpose() * h * h * P - kh * kh;
    const Eigen::MatrixXd closed = Eigen::MatrixXd(build_variance_operator(sym).diagonal().asDiagonal());
    a = std::max(a, (var - closed).cwiseAbs().maxCoeff());
  }
  double b = 0;
  for (int N = 8; N <= 200; N += 2) {
    const int M = N / 2;
    const double want = (M - 3.0) * (M - 2.0) * (M - 1.0) / 9.0;
    b = std::max(b, std::abs(build_variance_operator(SymBasis::build(N)).diagonal().sum() - want) / std::max(1.0, want));
  }
  const QuasimodeSet qs = quasimodes(140);
  double s = 0;
  const auto top = qs.members(Band::top);
  for (auto k : top) s += qs.variance[Eigen::Index(k)];
  const double density = s / double(top.size()) / 140.0;
  o.detail << "(a) " << a << " (b) rel " << b << " (c) " << density;
  o.check(a <= 1e-12, "(a) > 1e-12");
  o.check(b <= 1e-12, "(b) trace");
  o.check(std::abs(density - 0.0049) <= 0.2 * 0.0049, "(c) outside 0.0049 +-20%");
}

void c4(Outcome& o) {
  const ScarTimes st = scar_times(fidelity_series(32, 7.0, 0.01));
  o.detail << "t_half " << st.transfer.t << " t1 " << st.revival.t;
  o.check(std::abs(st.transfer.t - 2.35) <= 0.1, "t_half");
  o.check(std::abs(st.revival.t - 4.70) <= 0.1, "t1");
}

void c5(Outcome& o) {
  std::vector<double> N, f1, fh;
  for (int n = 40; n <= 720; n += 40) {
    const ScarTimes st = scar_times(fidelity_series(n, 7.0, 0.01));
    N.push_back(n);
    f1.push_back(st.revival.value);
    fh.push_back(st.transfer.value);
  }
  const InverseNFit r = fit_inverse_n(N, f1), t = fit_inverse_n(N, fh);
  o.detail << "N 40..720: revival b " << r.b << " R2 " << r.r2 << ", transfer b " << t.b << " R2 " << t.r2;
  o.check(r.r2 > 0.99 && t.r2 > 0.99, "R2");
  o.check(std::abs(r.b - 1.0) <= 0.02, "revival intercept");
  o.check(t.b < 0.98, "transfer intercept");
}

void c6(Outcome& o) {
  std::mt19937 rng(2024);
  double worst = 0;
  for (int N : {8, 12, 16}) {
    const auto full = ed::enumerate_basis(N);
    for (int k = 0; k < 50; ++k) {
      const SymVector v = random_sym(N, rng);
      const int L = N % 4 == 0 ? N / 2 : N / 2 - 1;
      worst = std::max(worst, std::abs(entropy(v, L) - ed::reduced_entropy(ed::embed(v, full), L)));
    }
  }
  const QuasimodeSet qs = quasimodes(32);
  const ScarTimes st = scar_times(fidelity_series(qs, 7.0, 0.01));
  const SymVector z2 = SymVector::basis_state(qs.basis, qs.basis->neel());
  const double s1 = entropy(evolve(z2, st.revival.t, qs)), sh = entropy(evolve(z2, st.transfer.t, qs));
  o.detail << "oracle " << worst << ", N=32 S(t1) " << s1 << " S(t_half) " << sh;
  o.check(worst <= 1e-8, "entropy oracle");
  o.check(s1 < sh, "S(t1) < S(t_half)");
}

void c7(Outcome& o) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> th(0, M_PI), ph(-M_PI, M_PI);
  double worst = 0;
  for (int N : {4, 8, 12}) {
    const auto full = ed::enumerate_basis(N);
    const auto b = SymBasis::build(N);
    for (int k = 0; k < 100; ++k) {
      const frame::CoherentPoint p{th(rng), ph(rng), th(rng), ph(rng)};
      const auto ref = ed::coherent_mps(full, p.theta1, p.phi1, p.theta2, p.phi2);
      worst = std::max(worst, (ref.coeffs - ed::embed(frame::coherent_in_K(p, b), full).coeffs).cwiseAbs().maxCoeff());
    }
  }
  o.detail << "embedding " << worst << ", ranks";
  o.check(worst <= 1e-12, "embedding");
  for (int N : {4, 8, 12, 16}) {
    const ed::SpanRank r = ed::span_rank_check(N);
    o.detail << " " << r.rank << "/" << r.dimension;
    o.check(r.rank == r.dimension, "rank at N=" + std::to_string(N));
  }
}

void c8(Outcome& o) {
  const int N = 8;
  const Eigen::MatrixXcd S = frame::frame_operator_quadrature(N, 2 * N, 2 * N + 2);
  const frame::FrameDiagonal fd = frame::frame_diagonal(SymBasis::build(N));
  double rel = 0;
  for (Eigen::Index i = 0; i < S.rows(); ++i) rel = std::max(rel, std::abs(S(i, i).real() / fd.values[i] - 1.0));
  std::vector<double> x, y;
  for (int n : {32, 64, 128, 256}) {
    x.push_back(std::log(double(n)));
    y.push_back(std::log(frame::averaged_fubini_study(n)));
  }
  double mx = 0, my = 0;
  for (int k = 0; k < 4; ++k) mx += x[k] / 4, my += y[k] / 4;
  double sxy = 0, sxx = 0;
  for (int k = 0; k < 4; ++k) sxy += (x[k] - mx) * (y[k] - my), sxx += (x[k] - mx) * (x[k] - mx);
  const double slope = sxy / sxx;
  o.detail << "quadrature rel " << rel << ", D_FS slope " << slope;
  o.check(rel <= 1e-8, "quadrature");
  o.check(std::abs(slope + 0.5) <= 0.1, "slope");
}

void c9(Outcome& o) {
  const int N = 128;
  const frame::FlowField a(N, frame::FlowMode::original), b(N, frame::FlowMode::transformed);
  double worst = 1;
  int below = 0, total = 0;
  // 41-point grid on [-2.5, 2.5], endpoints excluded.
  for (int i = 1; i < 40; ++i)
    for (int j = 1; j < 40; ++j) {
      const double t1 = -2.5 + 5.0 * i / 40, t2 = -2.5 + 5.0 * j / 40;
      const double c = frame::cosine_similarity(a.at(t1, t2), b.at(t1, t2));
      worst = std::min(worst, c);
      below += c <= 0.99;
      ++total;
    }
  const frame::Closure cl = frame::closure(frame::integrate_flow(b, M_PI - 1e-3, 1e-3, 0.01, 7.0));
  o.detail << "min cosine " << worst << " (" << below << "/" << total << " <= 0.99), closure " << cl.distance << " at t "
           << cl.period;
  o.check(below == 0, "cosine similarity");
  o.check(cl.returned && cl.distance <= 0.05, "closure");
}

void c10(Outcome& o) {
  const int N = 128;
  const QuasimodeSet qs = quasimodes(N);
  frame::FrameDiagonal fd = frame::frame_diagonal(qs.basis);
  fd.eps = frame::default_epsilon(fd);
  const regions::Grid g = regions::build(N);
  const auto [top, bulk] = regions::pick_modes(qs);
  const regions::Weights wt = regions::measure(qs, top, g, fd), wb = regions::measure(qs, bulk, g, fd);
  o.detail << "top E=" << qs.energies[Eigen::Index(top)] << " orbit " << wt.mass[regions::orbit] << " corners "
           << wt.mass[regions::corner] << "; bulk E=" << qs.energies[Eigen::Index(bulk)] << " orbit "
           << wb.mass[regions::orbit] << " corners " << wb.mass[regions::corner];
  o.check(wt.mass[regions::orbit] >= 3 * wt.mass[regions::corner], "top band ordering");
  o.check(wb.mass[regions::corner] > wb.mass[regions::orbit], "bulk ordering");
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria{
      {"combinatorics vs enumeration", c1}, {"projected Hamiltonian", c2}, {"variance identities", c3},
      {"revival timing", c4},               {"fidelity scaling", c5},      {"entropy oracle", c6},
      {"coherent embedding and span", c7},  {"frame operator", c8},        {"flow correspondence", c9},
      {"scarring picture", c10}};
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[k].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %zu (%s): %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first,
                o.detail.str().c_str(), s);
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed ? 1 : 0;
}
