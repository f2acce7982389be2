#include "scarlab/combinatorics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "scarlab/error.hpp"

namespace scarlab {

std::string to_string(Boundary b) { return b == Boundary::periodic ? "pbc" : "obc"; }

Boundary parse_boundary(const std::string& s) {
  if (s == "pbc") return Boundary::periodic;
  if (s == "obc") return Boundary::open;
  throw ValidationError("boundary must be pbc or obc, got '" + s + "'");
}

std::string to_string(ExactCount v) {
  if (v == 0) return "0";
  std::string out;
  while (v > 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

double Count::value() const { return zero ? 0.0 : std::exp(log); }

Count Count::from_exact(ExactCount v, bool keep_exact) {
  Count c;
  if (keep_exact) c.exact = v;
  c.zero = (v == 0);
  c.log = c.zero ? -std::numeric_limits<double>::infinity()
                 : std::log(static_cast<long double>(v));
  return c;
}

Count Count::from_double(double v) {
  Count c;
  c.zero = !(v > 0.0);
  c.log = c.zero ? -std::numeric_limits<double>::infinity() : std::log(v);
  return c;
}

double log_binomial(int n, int k) {
  if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

ExactCount exact_binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  ExactCount r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<ExactCount>(n - k + i) / static_cast<ExactCount>(i);
  return r;
}

namespace {

void check_size(int N) {
  require(N >= 2, "N must be at least 2, got " + std::to_string(N));
  require(N % 2 == 0, "N must be even, got " + std::to_string(N));
}

void check_labels(int N, int n1, int n2) {
  const int M = N / 2;
  require(n1 >= 0 && n2 >= 0, "occupations must be non-negative");
  require(n1 <= M && n2 <= M, "occupations must not exceed N/2");
}

Count periodic_class_size(int N, int n1, int n2) {
  const int M = N / 2;
  const bool keep = N <= kExactCountMaxN;
  const int n = n1 + n2;
  if (n > M) return Count::from_exact(0, keep);
  // Corner rule: a full sublattice forces the other one empty.
  if (n1 == M || n2 == M) return Count::from_exact((n1 == 0 || n2 == 0) ? 1 : 0, keep);
  if (n == M) return Count::from_exact(0, keep);

  Count c;
  c.zero = false;
  c.log = std::log(double(M)) + std::log(double(M - n)) - std::log(double(M - n1)) -
          std::log(double(M - n2)) + log_binomial(M - n1, n2) + log_binomial(M - n2, n1);
  if (keep) {
    const ExactCount num = ExactCount(M) * ExactCount(M - n) * exact_binomial(M - n1, n2) *
                           exact_binomial(M - n2, n1);
    const ExactCount den = ExactCount(M - n1) * ExactCount(M - n2);
    c.exact = num / den;
  }
  return c;
}

// Transfer recursion over sites of an open chain: state is (first site
// occupied, last site occupied, n1, n2).
template <class T>
std::vector<T> open_chain_dp(int N) {
  const int M = N / 2;
  const int W = M + 1;
  auto idx = [W](int a, int last, int n1, int n2) {
    return ((std::size_t(a) * 2 + last) * W + n1) * W + n2;
  };
  std::vector<T> cur(4 * W * W, T(0)), next(4 * W * W, T(0));
  cur[idx(0, 0, 0, 0)] = T(1);
  cur[idx(1, 1, 1, 0)] = T(1);  // site 1 is on sublattice 1
  for (int site = 2; site <= N; ++site) {
    const bool sub1 = (site % 2 == 1);
    std::fill(next.begin(), next.end(), T(0));
    for (int a = 0; a < 2; ++a)
      for (int last = 0; last < 2; ++last)
        for (int n1 = 0; n1 <= M; ++n1)
          for (int n2 = 0; n2 <= M; ++n2) {
            const T v = cur[idx(a, last, n1, n2)];
            if (v == T(0)) continue;
            next[idx(a, 0, n1, n2)] += v;
            if (last == 0) {
              if (sub1 && n1 < M) next[idx(a, 1, n1 + 1, n2)] += v;
              if (!sub1 && n2 < M) next[idx(a, 1, n1, n2 + 1)] += v;
            }
          }
    std::swap(cur, next);
  }
  // Reorder to (n1, n2, a, b).
  std::vector<T> out(std::size_t(W) * W * 4, T(0));
  for (int n1 = 0; n1 <= M; ++n1)
    for (int n2 = 0; n2 <= M; ++n2)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) out[((std::size_t(n1) * W + n2) * 2 + a) * 2 + b] = cur[idx(a, b, n1, n2)];
  return out;
}

std::vector<Count> open_chain_counts(int N) {
  const bool keep = N <= kExactCountMaxN;
  std::vector<Count> out;
  if (keep) {
    const auto exact = open_chain_dp<ExactCount>(N);
    out.reserve(exact.size());
    for (auto v : exact) out.push_back(Count::from_exact(v, true));
  } else {
    const auto approx = open_chain_dp<long double>(N);
    out.reserve(approx.size());
    for (auto v : approx) {
      Count c;
      c.zero = !(v > 0);
      c.log = c.zero ? -std::numeric_limits<double>::infinity() : double(std::log(v));
      out.push_back(c);
    }
  }
  return out;
}

Count sum_counts(const Count* parts, int k, bool keep) {
  if (keep) {
    ExactCount s = 0;
    for (int i = 0; i < k; ++i) s += *parts[i].exact;
    return Count::from_exact(s, true);
  }
  double mx = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < k; ++i)
    if (!parts[i].zero) mx = std::max(mx, parts[i].log);
  if (!std::isfinite(mx)) return Count::none();
  double acc = 0;
  for (int i = 0; i < k; ++i)
    if (!parts[i].zero) acc += std::exp(parts[i].log - mx);
  Count c;
  c.zero = false;
  c.log = mx + std::log(acc);
  return c;
}

}  // namespace

Count class_size(int N, int n1, int n2, Boundary boundary) {
  check_size(N);
  check_labels(N, n1, n2);
  if (boundary == Boundary::periodic) return periodic_class_size(N, n1, n2);
  const auto table = ClassTable::build(N, Boundary::open);
  return table.at(n1, n2);
}

Count class_size_boundary(int N, int n1, int n2, int a, int b) {
  check_size(N);
  check_labels(N, n1, n2);
  require((a == 0 || a == 1) && (b == 0 || b == 1), "boundary flags must be 0 or 1");
  const auto table = ClassTable::build(N, Boundary::open);
  return table.at(n1, n2, a, b);
}

ClassTable ClassTable::build(int N, Boundary boundary) {
  check_size(N);
  ClassTable t;
  t.N_ = N;
  t.boundary_ = boundary;
  const int M = N / 2;
  const int W = M + 1;
  t.entries_.resize(std::size_t(W) * W);
  if (boundary == Boundary::periodic) {
    for (int n1 = 0; n1 <= M; ++n1)
      for (int n2 = 0; n2 <= M; ++n2) t.entries_[std::size_t(n1) * W + n2] = periodic_class_size(N, n1, n2);
    return t;
  }
  t.resolved_ = open_chain_counts(N);
  const bool keep = N <= kExactCountMaxN;
  for (int n1 = 0; n1 <= M; ++n1)
    for (int n2 = 0; n2 <= M; ++n2)
      t.entries_[std::size_t(n1) * W + n2] = sum_counts(&t.resolved_[(std::size_t(n1) * W + n2) * 4], 4, keep);
  return t;
}

const Count& ClassTable::at(int n1, int n2) const {
  check_labels(N_, n1, n2);
  return entries_[std::size_t(n1) * (half() + 1) + n2];
}

const Count& ClassTable::at(int n1, int n2, int a, int b) const {
  require(boundary_ == Boundary::open, "boundary-resolved counts exist for open chains only");
  check_labels(N_, n1, n2);
  require((a == 0 || a == 1) && (b == 0 || b == 1), "boundary flags must be 0 or 1");
  return resolved_[((std::size_t(n1) * (half() + 1) + n2) * 2 + a) * 2 + b];
}

// Coefficients of Tr{M^(N/2)} for the three-state gluing automaton whose
// states are the boundary motifs (sub1, sub2) in {oo, o*, *o}. Entry M[X][Y]
// is the monomial picked up when motif X is glued to the left of motif Y.
ElaboratedTable ElaboratedTable::build(int N) {
  check_size(N);
  require(N <= kExactCountMaxN, "elaborated class sizes are exact-only; N must be <= 64");
  ElaboratedTable t;
  t.N_ = N;
  t.half_ = N / 2;
  const int M = t.half_;
  const std::size_t W = M + 1;
  const std::size_t poly = W * W * W * W;
  t.entries_.assign(poly, 0);

  struct Mono {
    int x1, x2, y1, y2;
    bool allowed;
  };
  // States: 0 = oo, 1 = o* (excitation on sublattice 2), 2 = *o.
  const std::array<std::array<Mono, 3>, 3> process{{
      {{{0, 0, 1, 1, true}, {0, 0, 0, 1, true}, {0, 0, 0, 0, true}}},
      {{{0, 1, 0, 0, true}, {0, 1, 0, 0, true}, {0, 0, 0, 0, false}}},
      {{{1, 0, 1, 0, true}, {1, 0, 0, 0, true}, {1, 0, 0, 0, true}}},
  }};

  auto off = [W](int n1, int n2, int m1, int m2) {
    return ((std::size_t(n1) * W + n2) * W + m1) * W + m2;
  };
  for (int start = 0; start < 3; ++start) {
    std::array<std::vector<ExactCount>, 3> v;
    for (auto& p : v) p.assign(poly, 0);
    v[start][0] = 1;
    for (int step = 0; step < M; ++step) {
      std::array<std::vector<ExactCount>, 3> nv;
      for (auto& p : nv) p.assign(poly, 0);
      for (int X = 0; X < 3; ++X)
        for (int Y = 0; Y < 3; ++Y) {
          const Mono& mono = process[X][Y];
          if (!mono.allowed) continue;
          for (int n1 = 0; n1 + mono.x1 <= M; ++n1)
            for (int n2 = 0; n2 + mono.x2 <= M; ++n2)
              for (int m1 = 0; m1 + mono.y1 <= M; ++m1)
                for (int m2 = 0; m2 + mono.y2 <= M; ++m2) {
                  const ExactCount c = v[Y][off(n1, n2, m1, m2)];
                  if (c == 0) continue;
                  nv[X][off(n1 + mono.x1, n2 + mono.x2, m1 + mono.y1, m2 + mono.y2)] += c;
                }
        }
      v = std::move(nv);
    }
    for (std::size_t i = 0; i < poly; ++i) t.entries_[i] += v[start][i];
  }
  return t;
}

std::size_t ElaboratedTable::offset(int n1, int n2, int m1, int m2) const {
  const std::size_t W = half_ + 1;
  return ((std::size_t(n1) * W + n2) * W + m1) * W + m2;
}

ExactCount ElaboratedTable::at(int n1, int n2, int m1, int m2) const {
  require(n1 >= 0 && n2 >= 0 && m1 >= 0 && m2 >= 0, "labels must be non-negative");
  if (n1 > half_ || n2 > half_ || m1 > half_ || m2 > half_) return 0;
  return entries_[offset(n1, n2, m1, m2)];
}

ExactCount ElaboratedTable::marginal(int n1, int n2) const {
  ExactCount s = 0;
  for (int m1 = 0; m1 <= half_; ++m1)
    for (int m2 = 0; m2 <= half_; ++m2) s += at(n1, n2, m1, m2);
  return s;
}

ExactCount ElaboratedTable::first_moment_m1(int n1, int n2) const {
  ExactCount s = 0;
  for (int m1 = 0; m1 <= half_; ++m1)
    for (int m2 = 0; m2 <= half_; ++m2) s += ExactCount(m1) * at(n1, n2, m1, m2);
  return s;
}

ElaboratedTable::Moments ElaboratedTable::moments(int n1, int n2) const {
  Moments mom;
  const ExactCount total = marginal(n1, n2);
  if (total == 0) return mom;
  ExactCount s1 = 0, s2 = 0, s12 = 0;
  for (int m1 = 0; m1 <= half_; ++m1)
    for (int m2 = 0; m2 <= half_; ++m2) {
      const ExactCount c = at(n1, n2, m1, m2);
      s1 += ExactCount(m1) * c;
      s2 += ExactCount(m2) * c;
      s12 += ExactCount(m1) * ExactCount(m2) * c;
    }
  const long double tot = static_cast<long double>(total);
  mom.mean_m1 = double(static_cast<long double>(s1) / tot);
  mom.mean_m2 = double(static_cast<long double>(s2) / tot);
  mom.mean_m1m2 = double(static_cast<long double>(s12) / tot);
  return mom;
}

Count elaborated_class_size(int N, int n1, int n2, int m1, int m2) {
  const auto table = ElaboratedTable::build(N);
  return Count::from_exact(table.at(n1, n2, m1, m2), true);
}

}  // namespace scarlab
