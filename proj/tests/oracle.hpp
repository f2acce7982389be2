#pragma once

// Independent brute force for tests: walk every bitstring of a short chain.
// Site j is bit j-1; odd sites (even bits) form sublattice 1.

#include <array>
#include <cstdint>
#include <map>
#include <tuple>
#include <vector>

namespace oracle {

inline bool blockade_ok(std::uint64_t s, int N, bool periodic) {
  for (int j = 0; j + 1 < N; ++j)
    if ((s >> j & 1) && (s >> (j + 1) & 1)) return false;
  if (periodic && N > 1 && (s & 1) && (s >> (N - 1) & 1)) return false;
  return true;
}

inline std::vector<std::uint64_t> strings(int N, bool periodic) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t s = 0; s < (std::uint64_t(1) << N); ++s)
    if (blockade_ok(s, N, periodic)) out.push_back(s);
  return out;
}

inline std::pair<int, int> sublattice_counts(std::uint64_t s, int N) {
  int a = 0, b = 0;
  for (int j = 0; j < N; ++j)
    if (s >> j & 1) (j % 2 == 0 ? a : b)++;
  return {a, b};
}

inline std::map<std::pair<int, int>, long> label_counts(int N, bool periodic) {
  std::map<std::pair<int, int>, long> m;
  for (auto s : strings(N, periodic)) m[sublattice_counts(s, N)]++;
  return m;
}

// Open chain, keyed by (n1, n2, first site occupied, last site occupied).
inline std::map<std::tuple<int, int, int, int>, long> boundary_counts(int N) {
  std::map<std::tuple<int, int, int, int>, long> m;
  for (auto s : strings(N, false)) {
    const auto [a, b] = sublattice_counts(s, N);
    m[{a, b, int(s & 1), int(s >> (N - 1) & 1)}]++;
  }
  return m;
}

// Periodic chain, keyed by (n1, n2, m1, m2) with m_i the empty sites of
// sublattice i whose two neighbours are empty.
inline std::map<std::array<int, 4>, long> elaborated_counts(int N) {
  std::map<std::array<int, 4>, long> m;
  for (auto s : strings(N, true)) {
    const auto [a, b] = sublattice_counts(s, N);
    int m1 = 0, m2 = 0;
    for (int j = 0; j < N; ++j) {
      const int l = (j + N - 1) % N, r = (j + 1) % N;
      if (!(s >> j & 1) && !(s >> l & 1) && !(s >> r & 1)) (j % 2 == 0 ? m1 : m2)++;
    }
    m[{a, b, m1, m2}]++;
  }
  return m;
}

}  // namespace oracle
