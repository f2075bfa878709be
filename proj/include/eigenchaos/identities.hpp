#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eigenchaos/dynamics.hpp"
#include "eigenchaos/matrix.hpp"
#include "eigenchaos/partitions.hpp"
#include "eigenchaos/stats.hpp"

namespace eigenchaos {

// Monte Carlo check of one identity: two independently estimated sides and
// the z-score of their difference. When the right side is a closed form, its
// std_error carries only the documented systematic allowances (or is zero).
//
// Every check in this module takes a master seed instead of a live generator:
// trial k of stream row r draws from the stream (seed, r * 2^32 + k), so
// results are independent of thread count and scheduling. Draws rejected for
// near-degenerate spectra are retried on a forked stream and counted.
struct IdentityReport {
  MCEstimate lhs;
  MCEstimate rhs;
  double z_score = 0.0;
  long long trials = 0;
  std::uint64_t seed = 0;
  long long degenerate_redraws = 0;
  std::string params;  // JSON object with check-specific fields

  // {lhs, rhs, se_lhs, se_rhs, z, trials, seed, params}
  std::string to_json() const;
};

// Checks the stationary eigenvalue variance against the time-integrated
// eigenvector alignment along the flow:
//
//   Var(lambda_alpha(G)) = 2 tau * Integral_0^inf e^{-tau t} E[overlap_sq(t)] dt
//
// where overlap_sq(t) = <v_alpha(G(0)), v_alpha(G(t))>^2 along a stationary
// trajectory started from GOE(n). The factor 2 tau collects the GOE entry
// variances (each ordered off-diagonal pair contributes twice, the diagonal
// has variance 2) and the rate normalization of the flow.
//
// lhs: variance of lambda_alpha over independent draws. rhs: per-trial
// trapezoid quadrature of the integrand over time_grid (one trajectory per
// trial, so the reported SE includes the cross-time covariance). The rhs SE
// additionally carries two systematic allowances: the truncation tail, which
// is at most Var * e^{-tau t_max} because E[overlap_sq] is non-increasing,
// and a quadrature allowance from comparing against the half-resolution grid.
//
// time_grid must start at 0, end at t_max, be strictly increasing, and have
// an odd number of points (>= 3) so the half-resolution grid is nested;
// e^{-tau t_max} <= 0.01 is required so the truncation allowance is small.
IdentityReport ou_variance_identity_check(int n, int alpha, double tau, double t_max,
                                          const std::vector<double>& time_grid, long long trials,
                                          std::uint64_t seed);

// Checks the resampling variance identity for an admissible partition with
// blocks B_1..B_m: with X, Y independent copies and X^S the matrix taking its
// entries on the blocks of S from Y,
//
//   Var(f(X)) = (1/2m) Sum_{k=0}^{m-1} binom(m-1,k)^{-1} Sum_B Sum_{|A|=k, A not containing B}
//               E[(f(X) - f(X^B)) (f(X^A) - f(X^{A+B}))]
//
// with f = lambda_alpha. All 2^m resampled spectra per trial are computed
// from one shared (X, Y) pair (common random numbers across the (B, A)
// cells), and the inner sum is enumerated exactly, so m <= 8 is required.
// lhs: variance over independent draws. The default ensemble is the
// unit-variance profile with Gaussian entries.
IdentityReport pdbr_variance_identity_check(const AdmissiblePartition& p, int alpha,
                                            const VarianceProfile& profile, const EntryLaw& law,
                                            long long trials, std::uint64_t seed);
IdentityReport pdbr_variance_identity_check(const AdmissiblePartition& p, int alpha,
                                            long long trials, std::uint64_t seed);

// The per-level terms of the same decomposition,
//
//   T_k = binom(m-1,k)^{-1} Sum_B Sum_{|A|=k, A not containing B} E[Delta_B f * Delta_B f^A],
//
// estimated from the same enumeration (so Var = (1/2m) Sum_k T_k holds by
// construction on the rhs side). The ladder is non-increasing with
// T_{m-1} >= 0, and T_k <= (2m/(k+1)) Var; violations are flagged beyond the
// stated SE allowances. Adjacent levels are compared through their per-trial
// difference (common random numbers), which is what "combined SE" means here.
struct TkLadderReport {
  std::vector<MCEstimate> t_k;        // T_0 .. T_{m-1}
  MCEstimate variance;                // independent Var(lambda_alpha) estimate
  std::vector<MCEstimate> step;       // per-trial T_k - T_{k+1}; mean < -2 SE flags
  std::vector<bool> step_violation;   // step k: T_k >= T_{k+1} violated beyond 2 SE
  bool nonneg_ok = false;             // T_{m-1} >= -2 SE
  std::vector<bool> bound_violation;  // T_k <= (2m/(k+1)) Var beyond 3 combined SE
  bool all_ok = false;
  long long trials = 0;
  std::uint64_t seed = 0;

  std::string to_json() const;
};

TkLadderReport t_k_ladder(const AdmissiblePartition& p, int alpha, const VarianceProfile& profile,
                          const EntryLaw& law, long long trials, std::uint64_t seed);
TkLadderReport t_k_ladder(const AdmissiblePartition& p, int alpha, long long trials,
                          std::uint64_t seed);

// Closed-form covariance of the two one-ring block differences at ring count
// K_B, per entry of variance sigma2:
//
//   E[Delta_B G_ij * Delta_B G(K)_ij] = 2 (1 - e^{-tau}) sigma2              if K_B = 0,
//                                     = -(1 - e^{-tau})^2 e^{-tau (K_B - 1)} sigma2  otherwise,
//
// where Delta_B G = G - G(e_B) and Delta_B G(K) = G(K) - G(K + e_B) are read
// off a single trajectory of the block flow. Positive iff K_B = 0.
double pdbou_diff_cov(double tau, int k_b, double sigma2);

// Monte Carlo check of pdbou_diff_cov for one entry (i,j) of block
// `block_id` (0-based): simulates the coupled quadruple (G, G(e_B), G(K),
// G(K + e_B)) along one trajectory — the ring at the head of the path is the
// shared segment, so G(e_B) and the extension of G(K) reuse it — and compares
// against the closed form. `entry` is 1-based and must lie in the block;
// default is the block's first upper representative. Entries outside the
// acted block cancel from both differences, so only that block is simulated.
IdentityReport pdbou_diff_cov_mc(const AdmissiblePartition& p, double tau, const RingCounts& K,
                                 int block_id, long long trials, std::uint64_t seed,
                                 std::optional<std::pair<int, int>> entry = std::nullopt,
                                 std::optional<VarianceProfile> profile = std::nullopt);

// Largest horizon t for which the dominance half_plus >= minus is asserted:
//   t_cap = (e^tau / eta) * log(1 / (1 - e^{-tau})).
double pdbou_dominance_time_cap(double tau, double eta);

// Estimates the two halves of the block-flow alignment decomposition at
// horizon t. With K a product-Poisson(eta t) ring count and d_ij(K) =
// E[d_ij lambda(G) * d_ij lambda(G(K))],
//
//   T_+ = 4 (1 - e^{-tau})   * Sum_B Sum_{(i,j) in B} E[ 1{K_B  = 0} d_ij(K) ]
//   T_- = 2 (1 - e^{-tau})^2 * Sum_B Sum_{(i,j) in B} E[ 1{K_B >= 1} e^{-tau (K_B - 1)} d_ij(K) ],
//
// both estimated from one (G, G(K)) pair per trial with fresh K. The
// position sum runs over ordered pairs, so an upper representative with
// i != j counts twice. Reported alongside: the per-trial difference
// T_+/2 - T_- (dominance holds within 2 SE whenever t <= t_cap), and the
// alignment product for a monitored off-diagonal entry bucketed by its
// block's ring count (0,1,2,3,4+), each bucket nonnegative within 2 SE.
struct TPlusMinusReport {
  MCEstimate t_plus;
  MCEstimate t_minus;
  MCEstimate half_diff;  // per-trial T_+/2 - T_-
  double t_cap = 0.0;
  bool t_in_range = false;
  bool dominance_ok = false;  // half_diff.mean >= -2 SE; meaningful when t_in_range
  std::vector<MCEstimate> k_bucket_alignment;  // monitored-entry product by ring-count bucket
  std::vector<long long> k_bucket_counts;
  bool positivity_ok = false;
  int monitored_block = 0;                  // 0-based block id
  std::pair<int, int> monitored_entry{0, 0};  // 1-based
  long long degenerate_redraws = 0;
  long long trials = 0;
  std::uint64_t seed = 0;

  std::string to_json() const;
};

TPlusMinusReport t_plus_minus(const AdmissiblePartition& p, int alpha, double eta, double tau,
                              double t, long long trials, std::uint64_t seed);

// Estimates E[overlap_sq(t)] along one stationary trajectory per trial at
// each grid time (GOE start). A grid time of exactly 0 is reported as exactly
// 1 with zero SE. Adjacent times are compared through their per-trial
// difference; an increase beyond 2 SE is flagged (the curve is
// non-increasing in t).
struct OverlapCurveReport {
  std::vector<double> times;
  std::vector<MCEstimate> overlap;  // E[overlap_sq] at each grid time
  std::vector<MCEstimate> step;     // per-trial overlap(t_{k+1}) - overlap(t_k)
  std::vector<bool> step_violation;
  bool all_ok = false;
  long long degenerate_redraws = 0;
  long long trials = 0;
  std::uint64_t seed = 0;

  std::string to_json() const;
};

OverlapCurveReport ou_overlap_monotonicity(int n, int alpha, double tau,
                                           const std::vector<double>& time_grid, long long trials,
                                           std::uint64_t seed);

}  // namespace eigenchaos
