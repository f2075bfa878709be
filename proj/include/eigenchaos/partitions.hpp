#pragma once
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eigenchaos/common.hpp"
#include "eigenchaos/rng.hpp"

namespace eigenchaos {

// A block is a symmetric set of matrix positions. Positions are stored
// 1-based (as they appear in partition files), sorted, and mirror-closed:
// (i,j) present iff (j,i) present.
struct Block {
  std::vector<std::pair<int, int>> positions;
};

// Size parameter of a block: number of positions plus the number of diagonal
// positions (diagonal entries count twice). Throws ValidationError when the
// block is not mirror-closed.
int nu(const Block& b);

struct PartitionViolation {
  std::string condition;  // "symmetry" | "coverage" | "disjointness" | "equal-nu"
  std::string message;    // includes witnessing 1-based indices
};

// Disjoint symmetric blocks covering [n]x[n] with a common size parameter.
// Construct via the builders below or from a file; call finalize() after
// assembling blocks by hand. finalize() validates admissibility (throwing
// CheckFailure on violation) and builds the lookup caches.
struct AdmissiblePartition {
  int n = 0;
  std::vector<Block> blocks;
  int nu = 0;  // common size parameter; set by finalize()

  int m() const { return static_cast<int>(blocks.size()); }

  void finalize();
  bool finalized() const { return finalized_; }

  // Block id owning position (i,j); arguments 0-based.
  int block_of(int i, int j) const { return owner_[static_cast<std::size_t>(i) * n + j]; }

  // Upper-triangle representatives (i <= j, 0-based) of block a, sorted.
  // Iterating these visits each independent entry of the block exactly once.
  const std::vector<std::pair<int, int>>& upper_reps(int a) const { return reps_[a]; }

 private:
  std::vector<int> owner_;
  std::vector<std::vector<std::pair<int, int>>> reps_;
  bool finalized_ = false;
};

// First violated admissibility condition, or nullopt when p is admissible.
// Checks, in order: per-block symmetry, coverage of [n]x[n], pairwise
// disjointness, equal size parameter.
std::optional<PartitionViolation> validate_partition(const AdmissiblePartition& p);

// One block per independent entry: {(i,j),(j,i)} for i<j and {(i,i)} on the
// diagonal, in row-major upper-triangle order. m = n(n+1)/2, every nu = 2.
AdmissiblePartition entries_partition(int n);

// Banded construction with uniform nu = 2*width^2. The index set splits into
// n/width contiguous groups; each off-diagonal group pair contributes one
// mirrored tile, and the diagonal-group residue is repackaged into equal-size
// bundles. Feasible iff width | n and 2*width^2 | n*(width+1); otherwise
// throws ValidationError("infeasible tiling: ..."). width=1 reproduces
// entries_partition(n).
AdmissiblePartition band_partition(int n, int width);

// Union of k distinct blocks chosen uniformly without replacement.
struct UnionSet {
  std::vector<std::pair<int, int>> indices;  // 1-based positions, sorted
  int k = 0;
  std::vector<int> block_ids;  // sorted, 0-based into p.blocks
};

UnionSet sample_union(const AdmissiblePartition& p, int k, Rng& rng);

// Text serialization: header "n m nu", then one line per block listing its
// positions as 1-based "i,j" pairs separated by spaces. Loading re-runs the
// validator: parse problems raise ValidationError, admissibility violations
// raise CheckFailure carrying the violation report.
void write_partition_text(const std::string& path, const AdmissiblePartition& p);
AdmissiblePartition read_partition_text(const std::string& path);

}  // namespace eigenchaos
