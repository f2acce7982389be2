#include "scarlab/quasimodes.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "scarlab/error.hpp"

namespace scarlab {

std::string to_string(Band b) {
  switch (b) {
    case Band::top: return "top";
    case Band::second: return "second";
    default: return "bulk";
  }
}

std::string to_string(Parity p) { return p == Parity::even ? "even" : "odd"; }

std::vector<std::size_t> QuasimodeSet::members(Band b) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < band.size(); ++i)
    if (band[i] == b) out.push_back(i);
  return out;
}

namespace {

struct BlockModes {
  Eigen::VectorXd values;
  Eigen::VectorXd weights;  // |first component|^2 in the block
  Eigen::MatrixXd vectors;  // block coordinates
};

// Rotate every cluster of (numerically) degenerate eigenvectors so that only
// one member has a nonzero first component.
void concentrate_degenerate(linalg::EigenSystem& es) {
  const Eigen::Index n = es.values.size();
  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index end = start + 1;
    while (end < n && es.values[end] - es.values[end - 1] < 1e-10) ++end;
    const Eigen::Index k = end - start;
    if (k > 1) {
      Eigen::MatrixXd w = es.vectors.block(0, start, 1, k).transpose();
      if (w.norm() > 0) {
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(w);
        const Eigen::MatrixXd Q = qr.householderQ();
        es.vectors.middleCols(start, k) = es.vectors.middleCols(start, k) * Q;
      }
    }
    start = end;
  }
}

BlockModes solve_block(const ParityBlock& blk, bool dense, const std::string& tag) {
  BlockModes out;
  if (blk.size() == 0) return out;
  if (dense) {
    auto es = linalg::symmetric_eigen(Eigen::MatrixXd(blk.matrix), tag);
    concentrate_degenerate(es);
    out.values = es.values;
    out.weights = es.vectors.row(0).transpose().cwiseAbs2();
    out.vectors = std::move(es.vectors);
  } else {
    auto m = linalg::banded_spectral_measure(blk.matrix, tag);
    out.values = m.values;
    out.weights = m.weights;
  }
  return out;
}

}  // namespace

QuasimodeSet diagonalize(const SymOperator& H, const DiagonalizeOptions& opts) {
  const BasisPtr& basis = H.basis();
  const ParityBlocks blocks = exchange_parity_blocks(basis, H);
  const bool dense = !opts.force_measure && basis->size() <= opts.dense_limit;
  const std::string n = "N=" + std::to_string(basis->N());
  const BlockModes ev = solve_block(blocks.even, dense, "even block " + n);
  const BlockModes od = solve_block(blocks.odd, dense, "odd block " + n);

  struct Entry {
    double e;
    Parity p;
    Eigen::Index k;
  };
  std::vector<Entry> all;
  for (Eigen::Index k = 0; k < ev.values.size(); ++k) all.push_back({ev.values[k], Parity::even, k});
  for (Eigen::Index k = 0; k < od.values.size(); ++k) all.push_back({od.values[k], Parity::odd, k});
  std::stable_sort(all.begin(), all.end(), [](const Entry& a, const Entry& b) { return a.e < b.e; });
  // Inside a degenerate cluster, rounding decides the order; fix it by weight,
  // then parity, so dense and measure mode agree.
  auto weight = [&](const Entry& x) { return (x.p == Parity::even ? ev : od).weights[x.k]; };
  for (std::size_t s = 0; s < all.size();) {
    std::size_t e = s + 1;
    while (e < all.size() && all[e].e - all[e - 1].e < 1e-10) ++e;
    std::stable_sort(all.begin() + long(s), all.begin() + long(e), [&](const Entry& a, const Entry& b) {
      const double wa = weight(a), wb = weight(b);
      if (std::abs(wa - wb) > 1e-12) return wa > wb;
      return a.p == Parity::even && b.p == Parity::odd;
    });
    s = e;
  }

  QuasimodeSet qs;
  qs.basis = basis;
  const Eigen::Index d = Eigen::Index(all.size());
  qs.energies.resize(d);
  qs.neel_overlap.resize(d);
  qs.variance = Eigen::VectorXd::Constant(d, std::numeric_limits<double>::quiet_NaN());
  qs.parity.resize(all.size());
  qs.band.assign(all.size(), Band::bulk);
  if (dense) qs.vectors.resize(Eigen::Index(basis->size()), d);
  const Eigen::VectorXd sigma2 = dense ? build_variance_operator(basis).diagonal() : Eigen::VectorXd();

  for (Eigen::Index i = 0; i < d; ++i) {
    const Entry& en = all[std::size_t(i)];
    const BlockModes& bm = en.p == Parity::even ? ev : od;
    const ParityBlock& blk = en.p == Parity::even ? blocks.even : blocks.odd;
    qs.energies[i] = en.e;
    qs.parity[std::size_t(i)] = en.p;
    // Z2 = (e + o)/sqrt2 with e, o the first members of the blocks.
    qs.neel_overlap[i] = 0.5 * bm.weights[en.k];
    if (dense) {
      const Eigen::VectorXcd col = blk.from_block(*basis, bm.vectors.col(en.k).cast<std::complex<double>>());
      qs.vectors.col(i) = col.real();
      qs.variance[i] = sigma2.dot(col.real().cwiseAbs2());
    }
  }
  return qs;
}

void label_bands(QuasimodeSet& qs) {
  const int N = qs.basis->N();
  const std::size_t d = qs.size();
  std::fill(qs.band.begin(), qs.band.end(), Band::bulk);
  if (d < std::size_t(N + 1)) throw ValidationError("too few modes to label a top band");
  const auto& E = qs.energies;
  const auto& w = qs.neel_overlap;

  // Largest overlap among modes with energy in [lo, hi); lower energy wins ties.
  auto pick = [&](double lo, double hi, const std::vector<bool>& taken) -> long {
    long best = -1;
    for (std::size_t i = 0; i < d; ++i) {
      if (taken[i] || E[Eigen::Index(i)] < lo || E[Eigen::Index(i)] >= hi) continue;
      if (best < 0 || w[Eigen::Index(i)] > w[best]) best = long(i);
    }
    return best;
  };

  std::vector<bool> taken(d, false);
  std::vector<std::size_t> top{0};
  taken[0] = true;
  const double e_end = -E[0];
  for (int k = 1; k <= N; ++k) {
    const double prev = E[Eigen::Index(top.back())];
    const double spacing = (e_end - prev) / double(N + 1 - k);
    long j = pick(prev + 0.5 * spacing, prev + 1.5 * spacing, taken);
    if (j < 0) {
      qs.flags.push_back("empty top-band window at k=" + std::to_string(k));
      j = pick(prev, std::numeric_limits<double>::infinity(), taken);
      if (j < 0) throw NumericalError("top-band sweep ran out of modes");
    }
    if (E[j] <= prev) qs.flags.push_back("non-monotone top band at k=" + std::to_string(k));
    top.push_back(std::size_t(j));
    taken[std::size_t(j)] = true;
  }
  for (auto i : top) qs.band[i] = Band::top;

  for (std::size_t k = 0; k + 1 < top.size(); ++k) {
    const double lo = E[Eigen::Index(top[k])];
    const double hi = E[Eigen::Index(top[k + 1])];
    const long j = pick(lo, hi, taken);
    if (j < 0) {
      qs.flags.push_back("empty second-band window at k=" + std::to_string(k));
      continue;
    }
    taken[std::size_t(j)] = true;
    qs.band[std::size_t(j)] = Band::second;
  }
}

QuasimodeSet quasimodes(int N, const DiagonalizeOptions& opts) {
  auto basis = SymBasis::build(N);
  QuasimodeSet qs = diagonalize(build_hamiltonian(basis), opts);
  label_bands(qs);
  return qs;
}

double participation_ratio(const Eigen::VectorXcd& state, const linalg::EigenSystem& full) {
  require(state.size() == full.vectors.rows(), "state and eigenbasis dimensions differ");
  const Eigen::VectorXcd amp = full.vectors.transpose().cast<std::complex<double>>() * state;
  double pr = 0.0;
  Eigen::Index start = 0;
  const Eigen::Index n = amp.size();
  while (start < n) {
    Eigen::Index end = start + 1;
    while (end < n && full.values[end] - full.values[end - 1] < 1e-10) ++end;
    const double p = amp.segment(start, end - start).squaredNorm();
    pr += p * p;
    start = end;
  }
  return pr;
}

}  // namespace scarlab
