#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <random>

#include "oracle.hpp"
#include "scarlab/ed_oracle.hpp"
#include "scarlab/entanglement.hpp"
#include "scarlab/error.hpp"
#include "scarlab/quasimodes.hpp"

using namespace scarlab;

namespace {
SymVector random_sym(int N, unsigned seed) {
  auto b = SymBasis::build(N);
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  SymVector v = SymVector::zero(b);
  for (Eigen::Index i = 0; i < v.coeffs.size(); ++i) v.coeffs[i] = {g(rng), g(rng)};
  v.coeffs.normalize();
  return v;
}
std::uint64_t neel_bits(int N) {
  std::uint64_t s = 0;
  for (int j = 0; j < N; j += 2) s |= std::uint64_t(1) << j;
  return s;
}
}  // namespace

TEST(FullBasis, Sizes) {
  EXPECT_EQ(ed::enumerate_basis(2)->size(), 3u);
  EXPECT_EQ(ed::enumerate_basis(4)->size(), 7u);
  EXPECT_EQ(ed::enumerate_basis(8)->size(), 47u);
  EXPECT_EQ(ed::enumerate_basis(3)->size(), 4u);
  std::size_t a = 3, b = 4;
  for (int N = 4; N <= 24; ++N) {
    const std::size_t c = a + b;
    EXPECT_EQ(ed::enumerate_basis(N)->size(), c) << N;
    a = b;
    b = c;
  }
  EXPECT_THROW(ed::enumerate_basis(30), ValidationError);
}

TEST(FullBasis, MatchesBruteForce) {
  for (int N = 2; N <= 14; ++N) {
    const auto ref = oracle::strings(N, true);
    const auto b = ed::enumerate_basis(N);
    ASSERT_EQ(b->states(), ref) << N;
    for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_EQ(b->index(ref[i]), i);
  }
}

TEST(Pxp, SmallStructure) {
  const auto b = ed::enumerate_basis(4);
  const SparseMatrix H = ed::build_pxp(*b);
  EXPECT_EQ(H.row(Eigen::Index(b->index(0))).nonZeros(), 4);
  const auto es = ed::full_spectrum(*ed::enumerate_basis(12));
  const Eigen::Index d = es.values.size();
  for (Eigen::Index k = 0; k < d; ++k) EXPECT_NEAR(es.values[k], -es.values[d - 1 - k], 1e-10);
}

TEST(Pxp, VariationalBound) {
  const auto full = ed::full_spectrum(*ed::enumerate_basis(8));
  const QuasimodeSet qs = quasimodes(8);
  EXPECT_GE(qs.energies[0], full.values[0] - 1e-12);
}

TEST(Embed, Examples) {
  const auto full = ed::enumerate_basis(8);
  const auto sym = SymBasis::build(8);
  const ed::FullVector n = ed::embed(SymVector::basis_state(sym, sym->neel()), full);
  EXPECT_NEAR(std::abs(n.coeffs[Eigen::Index(full->index(neel_bits(8)))]), 1.0, 1e-15);
  EXPECT_NEAR(n.norm2(), 1.0, 1e-15);
  const ed::FullVector a = ed::embed(SymVector::basis_state(sym, {0, 1}), full);
  int hits = 0;
  for (Eigen::Index i = 0; i < a.coeffs.size(); ++i)
    if (std::abs(a.coeffs[i]) > 0) {
      ++hits;
      EXPECT_NEAR(a.coeffs[i].real(), 0.5, 1e-15);
    }
  EXPECT_EQ(hits, 4);
}

TEST(Embed, Isometry) {
  const auto full = ed::enumerate_basis(12);
  const SymVector u = random_sym(12, 1), v = random_sym(12, 2);
  const auto eu = ed::embed(u, full), ev = ed::embed(v, full);
  EXPECT_NEAR(std::abs(eu.coeffs.dot(ev.coeffs) - u.coeffs.dot(v.coeffs)), 0.0, 1e-14);
  const SymVector back = ed::project(eu, u.basis);
  EXPECT_LE((back.coeffs - u.coeffs).norm(), 1e-14);
}

TEST(Embed, TranslationIsExchangeAndCommutesWithH) {
  for (int N = 4; N <= 12; N += 2) {
    const auto full = ed::enumerate_basis(N);
    const SymVector u = random_sym(N, unsigned(N));
    const auto tu = ed::translate(ed::embed(u, full));
    const auto su = ed::embed(u.swapped(), full);
    EXPECT_LE((tu.coeffs - su.coeffs).norm(), 1e-13) << N;
    const SparseMatrix H = ed::build_pxp(*full);
    const Eigen::VectorXcd htu = H.cast<std::complex<double>>() * tu.coeffs;
    const ed::FullVector hu{full, H.cast<std::complex<double>>() * ed::embed(u, full).coeffs};
    EXPECT_LE((htu - ed::translate(hu).coeffs).norm(), 1e-12) << N;
  }
}

TEST(EvolveKrylov, TrivialCases) {
  const auto full = ed::enumerate_basis(12);
  const SparseMatrix H = ed::build_pxp(*full);
  ed::FullVector psi{full, Eigen::VectorXcd::Zero(Eigen::Index(full->size()))};
  psi.coeffs[Eigen::Index(full->index(neel_bits(12)))] = 1.0;
  EXPECT_LE((ed::evolve_krylov(H, psi, 0.0, 0.1).coeffs - psi.coeffs).norm(), 1e-15);
  const auto es = ed::full_spectrum(*full);
  const ed::FullVector e{full, es.vectors.col(100).cast<std::complex<double>>()};
  const auto et = ed::evolve_krylov(H, e, 3.0, 0.1);
  const std::complex<double> ph = std::exp(std::complex<double>(0, -es.values[100] * 3.0));
  EXPECT_LE((et.coeffs - ph * e.coeffs).norm(), 1e-10);
}

TEST(EvolveKrylov, AgreesWithFullDiagonalisation) {
  const auto full = ed::enumerate_basis(16);
  const SparseMatrix H = ed::build_pxp(*full);
  const auto es = ed::full_spectrum(*full);
  const auto in = Eigen::Index(full->index(neel_bits(16)));
  ed::FullVector psi{full, Eigen::VectorXcd::Zero(Eigen::Index(full->size()))};
  psi.coeffs[in] = 1.0;
  const double t = 4.70;
  const double fk = std::norm(ed::evolve_krylov(H, psi, t, 0.05).coeffs[in]);
  std::complex<double> amp = 0;
  for (Eigen::Index k = 0; k < es.values.size(); ++k)
    amp += es.vectors(in, k) * es.vectors(in, k) * std::exp(std::complex<double>(0, -es.values[k] * t));
  EXPECT_NEAR(fk, std::norm(amp), 1e-6);
}

TEST(ReducedEntropy, Trivial) {
  const auto full = ed::enumerate_basis(4);
  ed::FullVector p{full, Eigen::VectorXcd::Zero(Eigen::Index(full->size()))};
  p.coeffs[Eigen::Index(full->index(0b0101))] = 1.0;
  EXPECT_NEAR(ed::reduced_entropy(p, 2), 0.0, 1e-14);
  ed::FullVector bell{full, Eigen::VectorXcd::Zero(Eigen::Index(full->size()))};
  bell.coeffs[Eigen::Index(full->index(0b0001))] = M_SQRT1_2;
  bell.coeffs[Eigen::Index(full->index(0b0100))] = M_SQRT1_2;
  EXPECT_NEAR(ed::reduced_entropy(bell, 2), std::log(2.0), 1e-14);
}

TEST(ReducedEntropy, AgreesWithSymmetricRoute) {
  const auto full = ed::enumerate_basis(12);
  for (unsigned s = 0; s < 5; ++s) {
    const SymVector v = random_sym(12, 100 + s);
    EXPECT_NEAR(ed::reduced_entropy(ed::embed(v, full), 6), entropy(v, 6), 1e-8);
    EXPECT_NEAR(ed::reduced_entropy(ed::embed(v, full), 4), entropy(v, 4), 1e-8);
  }
}

TEST(SpanRank, Examples) {
  EXPECT_EQ(ed::span_rank_check(4).rank, 5);
  EXPECT_EQ(ed::span_rank_check(8).rank, 12);
  EXPECT_EQ(ed::span_rank_check(8).dimension, 12);
  const std::vector<std::complex<double>> dup(5, {0.7, 0.2});
  EXPECT_THROW(ed::span_rank_check(8, dup, dup), NumericalError);
}

TEST(Snapshot, RoundTrip) {
  const auto full = ed::enumerate_basis(10);
  const SymVector v = random_sym(10, 9);
  const auto e = ed::embed(v, full);
  const std::string path = testing::TempDir() + "snap.bin";
  ed::write_snapshot(path, e);
  const auto r = ed::read_snapshot(path, full);
  EXPECT_LE((r.coeffs - e.coeffs).cwiseAbs().maxCoeff(), 1e-7);
  EXPECT_THROW(ed::read_snapshot(path, ed::enumerate_basis(12)), ValidationError);
  std::remove(path.c_str());
}
