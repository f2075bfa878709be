#pragma once
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "eigenchaos/matrix.hpp"
#include "eigenchaos/partitions.hpp"
#include "eigenchaos/rng.hpp"

namespace eigenchaos {

// Parameters of the matrix dynamics: tau is the per-ring OU rate, eta the
// Poisson clock rate per block, t the elapsed physical time.
struct OUParams {
  double tau = 1.0;
  double eta = 1.0;
  double t = 0.0;
  void validate() const;
};

// Poisson ring counts per block at one horizon, plus the per-entry view
// K̄_ij = K_B for the block containing (i,j).
struct RingCounts {
  const AdmissiblePartition* partition = nullptr;
  std::vector<int> per_block;

  int k_bar(int i, int j) const {  // 0-based matrix indices
    return per_block[partition->block_of(i, j)];
  }
  bool all_zero() const;
};

// Exact stationary OU transition over time gap dt:
//   X' = e^{-tau dt} X + sqrt(1 - e^{-2 tau dt}) * Xi,  Xi_ij ~ N(0, sigma_ij^2)
// with independent noise on and above the diagonal, drawn in row-major
// upper-triangle order. There is no discretization error: the pair (X, X')
// has the exact stationary joint law at gap dt. dt == 0 returns X bit-exact
// and consumes no randomness.
SymmetricMatrix ou_advance(const SymmetricMatrix& X, double dt, double tau,
                           const VarianceProfile& profile, Rng& rng);

// Same transition restricted to an index set; entries outside it are
// bit-identical to X. The set is given as upper-triangle representatives
// (i <= j, 0-based), processed in sorted order — one noise draw per entry.
SymmetricMatrix ou_advance_on(const SymmetricMatrix& X,
                              const std::vector<std::pair<int, int>>& upper_reps, double dt,
                              double tau, const VarianceProfile& profile, Rng& rng);

// Convenience overloads for the partition-level index sets. Both validate
// symmetry of the set and convert to upper representatives.
SymmetricMatrix ou_advance_on(const SymmetricMatrix& X, const UnionSet& indices, double dt,
                              double tau, const VarianceProfile& profile, Rng& rng);
SymmetricMatrix ou_advance_on(const SymmetricMatrix& X, const Block& block, double dt, double tau,
                              const VarianceProfile& profile, Rng& rng);

// K_B i.i.d. Poisson(eta * t), one count per block in block order.
RingCounts pdbou_ring_counts(const AdmissiblePartition& p, double eta, double t, Rng& rng);

// Continuation of a sampled pair (G, G(K)): extend(b) returns G(K + e_b),
// i.e. block b advanced one further ring (tau-time 1) with fresh noise from
// the stream captured at creation. Single-use per call site; not shareable
// across threads.
class PdbouHandle {
 public:
  SymmetricMatrix extend(int block_id) const;

  PdbouHandle(const AdmissiblePartition* p, SymmetricMatrix g_k, double tau,
              const VarianceProfile* profile, Rng* rng)
      : p_(p), g_k_(std::move(g_k)), tau_(tau), profile_(profile), rng_(rng) {}

 private:
  const AdmissiblePartition* p_;
  SymmetricMatrix g_k_;
  double tau_;
  const VarianceProfile* profile_;
  Rng* rng_;
};

struct PdbouPair {
  SymmetricMatrix g_k;
  PdbouHandle handle;
};

// Realize G(K) from G along one Brownian path: each block B with K_B rings
// is advanced by a single exact transition of gap K_B (tau-units), blocks in
// index order. Exact by the Markov property; the W(e^{2 tau K} - 1)
// representation is never materialized.
PdbouPair pdbou_sample_pair(const SymmetricMatrix& G, const RingCounts& K, double tau,
                            const VarianceProfile& profile, Rng& rng);

// X^A: entries on A taken from Y, all others from X.
SymmetricMatrix block_resample(const SymmetricMatrix& X, const SymmetricMatrix& Y,
                               const UnionSet& A);

// A coupled pair of matrices plus a record of which entries were acted on.
struct CoupledPair {
  SymmetricMatrix first;
  SymmetricMatrix second;
  UnionSet acted;
  std::string description;
};

using MatrixSampler = std::function<SymmetricMatrix(Rng&)>;

// Draw X and an independent copy Y from `sampler`, sample A as a uniform
// union of k blocks, and return (X, X^A).
CoupledPair resample_draw(const MatrixSampler& sampler, const AdmissiblePartition& p, int k,
                          Rng& rng);

}  // namespace eigenchaos
