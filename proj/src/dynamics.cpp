#include "eigenchaos/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace eigenchaos {

void OUParams::validate() const {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw ValidationError("tau must be > 0");
  if (!(eta > 0.0) || !std::isfinite(eta)) throw ValidationError("eta must be > 0");
  if (!(t >= 0.0) || !std::isfinite(t)) throw ValidationError("t must be >= 0");
}

bool RingCounts::all_zero() const {
  return std::all_of(per_block.begin(), per_block.end(), [](int k) { return k == 0; });
}

namespace {

void check_advance_args(const SymmetricMatrix& X, double dt, double tau,
                        const VarianceProfile& profile) {
  if (!(dt >= 0.0) || !std::isfinite(dt)) {
    throw ValidationError("ou_advance: dt must be >= 0, got " + std::to_string(dt));
  }
  if (!(tau > 0.0) || !std::isfinite(tau)) throw ValidationError("ou_advance: tau must be > 0");
  if (profile.n != X.n()) {
    throw ValidationError("ou_advance: profile dimension " + std::to_string(profile.n) +
                          " does not match matrix dimension " + std::to_string(X.n()));
  }
}

// Convert a symmetric set of 1-based positions to sorted 0-based upper reps,
// rejecting asymmetric sets.
std::vector<std::pair<int, int>> to_upper_reps(const std::vector<std::pair<int, int>>& positions,
                                               int n) {
  std::set<std::pair<int, int>> s(positions.begin(), positions.end());
  std::vector<std::pair<int, int>> reps;
  for (auto [i, j] : s) {
    if (i < 1 || i > n || j < 1 || j > n) {
      throw ValidationError("index set: position (" + std::to_string(i) + "," +
                            std::to_string(j) + ") outside [1," + std::to_string(n) + "]^2");
    }
    if (!s.count({j, i})) {
      throw ValidationError("index set is not symmetric: contains (" + std::to_string(i) + "," +
                            std::to_string(j) + ") but not its mirror");
    }
    if (i <= j) reps.emplace_back(i - 1, j - 1);
  }
  std::sort(reps.begin(), reps.end());
  return reps;
}

}  // namespace

SymmetricMatrix ou_advance_on(const SymmetricMatrix& X,
                              const std::vector<std::pair<int, int>>& upper_reps, double dt,
                              double tau, const VarianceProfile& profile, Rng& rng) {
  check_advance_args(X, dt, tau, profile);
  SymmetricMatrix out = X;
  if (dt == 0.0 || upper_reps.empty()) return out;
  double decay = std::exp(-tau * dt);
  // 1 - e^{-2 tau dt} via expm1 keeps precision for tiny gaps.
  double noise_scale = std::sqrt(-std::expm1(-2.0 * tau * dt));
  for (auto [i, j] : upper_reps) {
    double sd = std::sqrt(profile.at(i, j));
    out.set(i, j, decay * X(i, j) + noise_scale * sd * rng.normal());
  }
  return out;
}

SymmetricMatrix ou_advance(const SymmetricMatrix& X, double dt, double tau,
                           const VarianceProfile& profile, Rng& rng) {
  check_advance_args(X, dt, tau, profile);
  SymmetricMatrix out = X;
  if (dt == 0.0) return out;
  double decay = std::exp(-tau * dt);
  double noise_scale = std::sqrt(-std::expm1(-2.0 * tau * dt));
  int n = X.n();
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      double sd = std::sqrt(profile.at(i, j));
      out.set(i, j, decay * X(i, j) + noise_scale * sd * rng.normal());
    }
  }
  return out;
}

SymmetricMatrix ou_advance_on(const SymmetricMatrix& X, const UnionSet& indices, double dt,
                              double tau, const VarianceProfile& profile, Rng& rng) {
  return ou_advance_on(X, to_upper_reps(indices.indices, X.n()), dt, tau, profile, rng);
}

SymmetricMatrix ou_advance_on(const SymmetricMatrix& X, const Block& block, double dt, double tau,
                              const VarianceProfile& profile, Rng& rng) {
  return ou_advance_on(X, to_upper_reps(block.positions, X.n()), dt, tau, profile, rng);
}

RingCounts pdbou_ring_counts(const AdmissiblePartition& p, double eta, double t, Rng& rng) {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw ValidationError("pdbou_ring_counts: eta must be > 0");
  if (!(t >= 0.0) || !std::isfinite(t)) throw ValidationError("pdbou_ring_counts: t must be >= 0");
  RingCounts K;
  K.partition = &p;
  K.per_block.resize(p.m());
  double mean = eta * t;
  for (int a = 0; a < p.m(); ++a) K.per_block[a] = static_cast<int>(rng.poisson(mean));
  return K;
}

SymmetricMatrix PdbouHandle::extend(int block_id) const {
  if (block_id < 0 || block_id >= p_->m()) {
    throw ValidationError("PdbouHandle::extend: block id out of range");
  }
  return ou_advance_on(g_k_, p_->upper_reps(block_id), 1.0, tau_, *profile_, *rng_);
}

PdbouPair pdbou_sample_pair(const SymmetricMatrix& G, const RingCounts& K, double tau,
                            const VarianceProfile& profile, Rng& rng) {
  if (K.partition == nullptr) throw ValidationError("pdbou_sample_pair: ring counts lack a partition");
  const AdmissiblePartition& p = *K.partition;
  if (p.n != G.n()) throw ValidationError("pdbou_sample_pair: partition/matrix dimension mismatch");
  SymmetricMatrix gk = G;
  for (int a = 0; a < p.m(); ++a) {
    if (K.per_block[a] > 0) {
      gk = ou_advance_on(gk, p.upper_reps(a), static_cast<double>(K.per_block[a]), tau, profile,
                         rng);
    }
  }
  PdbouHandle handle(&p, gk, tau, &profile, &rng);
  return PdbouPair{std::move(gk), std::move(handle)};
}

SymmetricMatrix block_resample(const SymmetricMatrix& X, const SymmetricMatrix& Y,
                               const UnionSet& A) {
  if (X.n() != Y.n()) {
    throw ValidationError("block_resample: dimension mismatch (" + std::to_string(X.n()) +
                          " vs " + std::to_string(Y.n()) + ")");
  }
  SymmetricMatrix out = X;
  for (auto [i, j] : A.indices) {
    if (i < 1 || i > X.n() || j < 1 || j > X.n()) {
      throw ValidationError("block_resample: position out of range");
    }
    out.set(i - 1, j - 1, Y(i - 1, j - 1));
  }
  return out;
}

CoupledPair resample_draw(const MatrixSampler& sampler, const AdmissiblePartition& p, int k,
                          Rng& rng) {
  SymmetricMatrix X = sampler(rng);
  SymmetricMatrix Y = sampler(rng);
  if (X.n() != p.n) throw ValidationError("resample_draw: sampler dimension does not match partition");
  UnionSet A = sample_union(p, k, rng);
  SymmetricMatrix XA = block_resample(X, Y, A);
  CoupledPair pair{std::move(X), std::move(XA), std::move(A),
                   "resample of " + std::to_string(k) + " of " + std::to_string(p.m()) +
                       " blocks"};
  return pair;
}

}  // namespace eigenchaos
