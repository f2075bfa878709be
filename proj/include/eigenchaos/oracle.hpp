#pragma once
#include <cstdint>
#include <string>
#include <vector>

namespace eigenchaos {

// One oracle check: an observed error (or z-score) against its limit.
struct OracleCheck {
  std::string name;
  bool passed = false;
  double observed = 0.0;
  double limit = 0.0;
  std::string detail;
};

struct OracleReport {
  std::vector<OracleCheck> checks;
  bool all_passed() const;
  std::string summary() const;  // one "[PASS]/[FAIL] name ..." line per check
};

// Finite-difference oracle for the eigenvalue derivatives at one (n, alpha).
// Gradient entries are compared against Richardson-extrapolated central
// differences, with the error measured relative to the gradient's largest
// entry (its natural scale); directional second derivatives assembled from
// the analytic second-derivative formula are compared against central second
// differences the same way. Draws whose spectrum has a small gap at alpha
// are redrawn (gap_guard fraction of the operator norm).
struct FdDerivativeReport {
  int n = 0;
  int alpha = 0;
  int draws = 0;
  long long redraws = 0;
  double max_grad_err = 0.0;  // max over draws/entries, relative to scale
  double max_hess_err = 0.0;  // max over draws/directions, relative
  double grad_tol = 0.0;
  double hess_tol = 0.0;
  bool passed = false;
};

FdDerivativeReport fd_derivative_check(int n, int alpha, int draws, std::uint64_t seed,
                                       double grad_rel_tol = 1e-5, double hess_rel_tol = 1e-3,
                                       double gap_guard = 0.01);

// The fast composed gate: finite-difference derivative checks at n=8,
// eigendecomposition reconstruction/orthogonality residuals at n in
// {2, 5, 32}, the one-block covariance Monte Carlo against its closed form
// at reduced trials, and semicircle classical-position residuals at n=100.
OracleReport oracle_suite(std::uint64_t seed = 1);

}  // namespace eigenchaos
