#pragma once

// Class sizes of the blockaded chain grouped by sublattice occupation.
//
// Sublattice 1 holds the odd sites (1, 3, ...), sublattice 2 the even ones.
// Every count is carried in two forms: an exact integer while the chain is
// short enough (N <= 64, where the whole constrained space has fewer than
// 2^63 states) and a natural log for every N. Downstream physics only ever
// needs ratios of counts, so the log form is the one used at large N.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace scarlab {

enum class Boundary { periodic, open };

std::string to_string(Boundary b);
Boundary parse_boundary(const std::string& s);

using ExactCount = unsigned __int128;

std::string to_string(ExactCount v);

inline constexpr int kExactCountMaxN = 64;

struct Count {
  std::optional<ExactCount> exact;  // present when N <= kExactCountMaxN
  double log = 0.0;                 // ln(count); meaningless when zero
  bool zero = true;

  double value() const;
  static Count from_exact(ExactCount v, bool keep_exact);
  static Count from_double(double v);
  static Count none() { return {}; }
};

// #(n1, n2) for a chain of N sites.
Count class_size(int N, int n1, int n2, Boundary boundary);

// #(n1, n2, a, b) for an open chain; a, b flag occupation of the first and
// last site.
Count class_size_boundary(int N, int n1, int n2, int a, int b);

// #(n1, n2, m1, m2) for a periodic chain, m_i counting excitable sites (empty
// sites with both neighbours empty) on sublattice i.
Count elaborated_class_size(int N, int n1, int n2, int m1, int m2);

class ClassTable {
 public:
  static ClassTable build(int N, Boundary boundary);

  int N() const { return N_; }
  int half() const { return N_ / 2; }
  Boundary boundary() const { return boundary_; }

  const Count& at(int n1, int n2) const;
  // Open chains only.
  const Count& at(int n1, int n2, int a, int b) const;
  bool has_boundary_resolved() const { return !resolved_.empty(); }

 private:
  int N_ = 0;
  Boundary boundary_ = Boundary::periodic;
  std::vector<Count> entries_;   // (half+1)^2, row-major in n1
  std::vector<Count> resolved_;  // (half+1)^2 * 4, open chains only
};

class ElaboratedTable {
 public:
  static ElaboratedTable build(int N);

  int N() const { return N_; }
  // Exact entries; zero for unreachable labels.
  ExactCount at(int n1, int n2, int m1, int m2) const;

  ExactCount marginal(int n1, int n2) const;
  // E[m1], E[m2], E[m1 m2] under the weights #(n1,n2,m1,m2) / #(n1,n2).
  struct Moments {
    double mean_m1 = 0, mean_m2 = 0, mean_m1m2 = 0;
    double covariance() const { return mean_m1m2 - mean_m1 * mean_m2; }
  };
  Moments moments(int n1, int n2) const;
  // Sum over (m1, m2) of m1 * #(n1,n2,m1,m2).
  ExactCount first_moment_m1(int n1, int n2) const;

 private:
  std::size_t offset(int n1, int n2, int m1, int m2) const;
  int N_ = 0;
  int half_ = 0;
  std::vector<ExactCount> entries_;
};

// ln C(n, k) via lgamma; -inf if k outside [0, n].
double log_binomial(int n, int k);
ExactCount exact_binomial(int n, int k);

}  // namespace scarlab
