#pragma once
#include <string>
#include <vector>

#include "eigenchaos/common.hpp"
#include "eigenchaos/rng.hpp"

namespace eigenchaos {

// Index conventions used across the library: matrix entry indices are
// 0-based; eigenvalue/eigenvector indices (alpha) are 1-based with alpha=1
// the largest eigenvalue. File formats print entry indices 1-based.

// Dense real symmetric matrix. Symmetry is maintained bit-exactly by
// construction: set() writes both (i,j) and (j,i).
class SymmetricMatrix {
 public:
  explicit SymmetricMatrix(int n);

  int n() const { return n_; }
  double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }
  void set(int i, int j, double v);

  const std::vector<double>& data() const { return a_; }
  bool same_bits(const SymmetricMatrix& other) const;
  double max_abs() const;        // max_ij |X_ij|
  double frobenius_norm() const;
  void check_finite() const;     // throws ValidationError on NaN/Inf

 private:
  int n_;
  std::vector<double> a_;  // row-major n*n
};

// Entrywise variances sigma_ij^2 with declared bounds. `normalized` asserts
// that every row sums to n (checked by validate()).
struct VarianceProfile {
  int n = 0;
  std::vector<double> sigma2;  // row-major n*n, symmetric
  double c1 = 0.0;
  double c2 = 0.0;
  bool normalized = false;

  double at(int i, int j) const { return sigma2[static_cast<std::size_t>(i) * n + j]; }
  void validate() const;  // throws ValidationError on any invariant breach

  // sigma_ij^2 = 1 + 1{i=j}: off-diagonal 1, diagonal 2. Rows sum to n+1, so
  // this profile does not carry the normalized flag.
  static VarianceProfile goe(int n);
  // sigma_ij^2 = 1 everywhere; rows sum to n.
  static VarianceProfile wigner(int n);
  // Alternating lo/hi by parity of i+j; requires even n and lo+hi=2 so each
  // row still sums to n.
  static VarianceProfile checkerboard(int n, double lo = 0.5, double hi = 1.5);
};

// Mean-zero, unit-variance entry distributions, all with a Lebesgue density
// and sub-Gaussian tails.
struct EntryLaw {
  enum class Kind { gaussian, uniform_scaled, shifted_bimodal_smoothed };
  Kind kind = Kind::gaussian;
  // shifted_bimodal_smoothed: equal mixture of N(+a, 1-a^2) and N(-a, 1-a^2);
  // `separation` is a, constrained to (0, 1).
  double separation = 0.94868329805051381;  // sqrt(0.9)

  double sample(Rng& rng) const;
  void validate() const;
  static EntryLaw parse(const std::string& name);
  std::string name() const;
};

// Eigendecomposition of one symmetric matrix: descending eigenvalues and the
// matching orthonormal eigenvectors. vec(i, alpha) is component i of
// v_alpha (alpha 1-based).
struct Spectrum {
  int n = 0;
  std::vector<double> eigenvalues;  // descending
  std::vector<double> vectors;      // column-major: vectors[(alpha-1)*n + i]

  double vec(int i, int alpha) const { return vectors[static_cast<std::size_t>(alpha - 1) * n + i]; }
  double operator_norm() const;  // max |eigenvalue|
};

// Samplers. Entries are drawn independently on and above the diagonal in
// row-major upper-triangle order (the order is part of the determinism
// contract).
SymmetricMatrix sample_goe(int n, Rng& rng);
SymmetricMatrix sample_generalized_wigner(const VarianceProfile& profile, const EntryLaw& law, Rng& rng);

// Full symmetric eigendecomposition (tridiagonalization + implicit-shift QL
// via Eigen's SelfAdjointEigenSolver). Eigenvector signs are canonicalized:
// the largest-magnitude component of each vector is made positive, ties
// broken by the lowest index. Throws EighError on non-convergence.
Spectrum eigh(const SymmetricMatrix& X);

// Eigenvalues only (descending); cheaper when vectors are not needed.
std::vector<double> eigh_values(const SymmetricMatrix& X);

double operator_norm(const SymmetricMatrix& X);

// Plain-text serialization: first line "n", then n rows of n space-separated
// values at 17 significant digits (lossless round trip). Writes are atomic
// (temp file + rename). Reading validates exact symmetry and finiteness.
void write_matrix_text(const std::string& path, const SymmetricMatrix& X);
SymmetricMatrix read_matrix_text(const std::string& path);

// Atomic text write used by all file-emitting code paths.
void write_text_atomic(const std::string& path, const std::string& content);

}  // namespace eigenchaos
