#pragma once
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "eigenchaos/common.hpp"

namespace eigenchaos {

// A Monte Carlo estimate with its standard error.
struct MCEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  long long trials = 0;
};

// Pairwise (cascade) summation with a fixed reduction tree. The tree shape
// depends only on the length, so sums are bit-identical no matter how the
// values were produced, and rounding error grows like O(log n) instead of
// O(n).
double pairwise_sum(std::span<const double> x);

// Mean and standard error of the mean, two-pass with pairwise sums.
MCEstimate mc_estimate(std::span<const double> values);

// Sample variance (unbiased) of `values` as the estimate, with the standard
// error of the variance estimator from the fourth central moment:
//   Var(s^2) ~= (m4 - s^4 (N-3)/(N-1)) / N.
MCEstimate variance_estimate(std::span<const double> values);

// Mean and standard error of the pairwise difference a[i] - b[i] (common
// random numbers across the two columns).
MCEstimate difference_estimate(std::span<const double> a, std::span<const double> b);

// Linear-interpolation (type 7) empirical quantile, p in [0,1].
double quantile(std::vector<double> values, double p);

// Quantile with an order-statistic standard error: the half-width between the
// order statistics at p +- sqrt(p(1-p)/N).
MCEstimate quantile_estimate(std::vector<double> values, double p);

}  // namespace eigenchaos
