#include <gtest/gtest.h>

#include <cmath>

#include "oracle.hpp"
#include "scarlab/combinatorics.hpp"
#include "scarlab/error.hpp"

using namespace scarlab;

namespace {
long exact_or_zero(const Count& c) { return c.zero ? 0 : long(*c.exact); }
}  // namespace

TEST(ClassSize, SmallExamples) {
  EXPECT_EQ(exact_or_zero(class_size(8, 0, 2, Boundary::periodic)), 6);
  EXPECT_EQ(exact_or_zero(class_size(8, 4, 0, Boundary::periodic)), 1);
  EXPECT_EQ(exact_or_zero(class_size(8, 1, 1, Boundary::periodic)), 8);
  EXPECT_EQ(exact_or_zero(class_size(8, 2, 2, Boundary::periodic)), 0);
  EXPECT_TRUE(class_size(8, 2, 2, Boundary::periodic).zero);
}

TEST(ClassSize, BlockadeZeros) {
  for (int N = 4; N <= 16; N += 2) {
    const int M = N / 2;
    for (int n1 = 0; n1 <= M; ++n1)
      for (int n2 = 0; n2 <= M; ++n2) {
        const bool forbidden = n1 + n2 > M || (n1 + n2 == M && n1 > 0 && n2 > 0);
        EXPECT_EQ(class_size(N, n1, n2, Boundary::periodic).zero, forbidden) << N << " " << n1 << " " << n2;
      }
  }
}

TEST(ClassSize, MatchesEnumerationBothBoundaries) {
  for (int N = 2; N <= 16; N += 2)
    for (bool periodic : {true, false}) {
      const auto ref = oracle::label_counts(N, periodic);
      const ClassTable t = ClassTable::build(N, periodic ? Boundary::periodic : Boundary::open);
      for (int n1 = 0; n1 <= N / 2; ++n1)
        for (int n2 = 0; n2 <= N / 2; ++n2) {
          const auto it = ref.find({n1, n2});
          const long want = it == ref.end() ? 0 : it->second;
          EXPECT_EQ(exact_or_zero(t.at(n1, n2)), want) << "N=" << N << " periodic=" << periodic << " " << n1 << "," << n2;
        }
    }
}

TEST(ClassSize, ExchangeSymmetry) {
  for (int N = 4; N <= 40; N += 4)
    for (int n1 = 0; n1 <= N / 2; ++n1)
      for (int n2 = 0; n2 <= N / 2; ++n2) {
        const Count a = class_size(N, n1, n2, Boundary::periodic), b = class_size(N, n2, n1, Boundary::periodic);
        ASSERT_EQ(a.zero, b.zero);
        if (!a.zero) EXPECT_EQ(*a.exact, *b.exact);
      }
}

TEST(ClassSize, Recurrence) {
  for (int N = 6; N <= 40; N += 2) {
    const int M = N / 2;
    for (int n1 = 1; n1 <= M; ++n1)
      for (int n2 = 0; n1 + n2 < M; ++n2) {
        const double lhs = class_size(N, n1, n2, Boundary::periodic).value();
        const double rhs = double(N) / (2.0 * n1) * (M - 1.0 - n2) / (M - 1.0) *
                           class_size(N - 2, n1 - 1, n2, Boundary::periodic).value();
        EXPECT_NEAR(lhs / rhs, 1.0, 1e-12) << N << " " << n1 << " " << n2;
      }
  }
}

TEST(ClassSize, LogAgreesWithExact) {
  for (int N = 4; N <= kExactCountMaxN; N += 2)
    for (int n1 = 0; n1 <= N / 2; ++n1)
      for (int n2 = 0; n1 + n2 <= N / 2; ++n2) {
        const Count c = class_size(N, n1, n2, Boundary::periodic);
        if (c.zero) continue;
        ASSERT_TRUE(c.exact.has_value());
        const double e = double(*c.exact);
        EXPECT_NEAR(std::exp(c.log) / e, 1.0, 1e-12) << N << " " << n1 << " " << n2;
      }
}

TEST(ClassSize, LargeNLogOnly) {
  const Count c = class_size(400, 100, 50, Boundary::periodic);
  EXPECT_FALSE(c.zero);
  EXPECT_FALSE(c.exact.has_value());
  EXPECT_TRUE(std::isfinite(c.log));
  EXPECT_EQ(class_size(400, 200, 0, Boundary::periodic).log, 0.0);
}

TEST(ClassSize, RejectsOddN) { EXPECT_THROW(class_size(7, 1, 1, Boundary::periodic), ValidationError); }

TEST(BoundaryClassSize, Examples) {
  EXPECT_EQ(exact_or_zero(class_size_boundary(4, 1, 0, 1, 0)), 1);
  for (int a = 0; a <= 1; ++a)
    for (int b = 0; b <= 1; ++b) EXPECT_TRUE(class_size_boundary(4, 2, 2, a, b).zero);
}

TEST(BoundaryClassSize, MatchesEnumerationAndPartitions) {
  for (int N = 2; N <= 16; N += 2) {
    const auto ref = oracle::boundary_counts(N);
    const ClassTable t = ClassTable::build(N, Boundary::open);
    for (int n1 = 0; n1 <= N / 2; ++n1)
      for (int n2 = 0; n2 <= N / 2; ++n2) {
        long sum = 0;
        for (int a = 0; a <= 1; ++a)
          for (int b = 0; b <= 1; ++b) {
            const auto it = ref.find({n1, n2, a, b});
            const long want = it == ref.end() ? 0 : it->second;
            EXPECT_EQ(exact_or_zero(t.at(n1, n2, a, b)), want) << N << " " << n1 << " " << n2 << " " << a << b;
            EXPECT_EQ(exact_or_zero(class_size_boundary(N, n1, n2, a, b)), want);
            sum += exact_or_zero(t.at(n1, n2, a, b));
          }
        EXPECT_EQ(sum, exact_or_zero(t.at(n1, n2)));
      }
  }
}

TEST(ElaboratedClassSize, Examples) {
  EXPECT_EQ(exact_or_zero(elaborated_class_size(8, 0, 0, 4, 4)), 1);
  const ElaboratedTable t = ElaboratedTable::build(8);
  EXPECT_EQ(long(t.marginal(1, 1)), 8);
  EXPECT_EQ(long(t.first_moment_m1(1, 1)), 2 * exact_or_zero(class_size(8, 2, 1, Boundary::periodic)));
}

TEST(ElaboratedClassSize, MatchesEnumeration) {
  for (int N = 4; N <= 16; N += 2) {
    const auto ref = oracle::elaborated_counts(N);
    const ElaboratedTable t = ElaboratedTable::build(N);
    const int M = N / 2;
    for (int n1 = 0; n1 <= M; ++n1)
      for (int n2 = 0; n2 <= M; ++n2)
        for (int m1 = 0; m1 <= M; ++m1)
          for (int m2 = 0; m2 <= M; ++m2) {
            const auto it = ref.find({n1, n2, m1, m2});
            const long want = it == ref.end() ? 0 : it->second;
            ASSERT_EQ(long(t.at(n1, n2, m1, m2)), want) << N << " " << n1 << n2 << m1 << m2;
          }
  }
}

TEST(ElaboratedClassSize, FirstMomentIdentity) {
  // Flipping any excitable site of sublattice 1 reaches (n1+1, n2), and each
  // such string is reached from exactly n1+1 predecessors.
  for (int N = 4; N <= 20; N += 2) {
    const ElaboratedTable t = ElaboratedTable::build(N);
    for (int n1 = 0; n1 < N / 2; ++n1)
      for (int n2 = 0; n1 + n2 < N / 2; ++n2)
        EXPECT_EQ(long(t.first_moment_m1(n1, n2)), (n1 + 1) * exact_or_zero(class_size(N, n1 + 1, n2, Boundary::periodic)))
            << N << " " << n1 << " " << n2;
  }
}

TEST(ElaboratedClassSize, ExcitableCountsUncorrelated) {
  for (int N = 8; N <= 20; N += 2) {
    const ElaboratedTable t = ElaboratedTable::build(N);
    const int M = N / 2;
    for (int n1 = 0; n1 <= M - 2; ++n1)
      for (int n2 = 0; n2 <= M - 2; ++n2) {
        if (class_size(N, n1, n2, Boundary::periodic).zero) continue;
        const auto mo = t.moments(n1, n2);
        EXPECT_NEAR(mo.covariance(), 0.0, 1e-9 * std::max(1.0, mo.mean_m1m2)) << N << " " << n1 << " " << n2;
      }
  }
}

TEST(Binomial, ExactAndLog) {
  EXPECT_EQ(long(exact_binomial(10, 3)), 120);
  EXPECT_EQ(long(exact_binomial(5, 7)), 0);
  EXPECT_NEAR(log_binomial(400, 200), std::lgamma(401.0) - 2 * std::lgamma(201.0), 1e-9);
  EXPECT_TRUE(std::isinf(log_binomial(3, 4)));
}
