#include "eigenchaos/stats.hpp"

#include <algorithm>

namespace eigenchaos {
namespace {

// Below this length, sum sequentially; the tree above it is fixed by length.
constexpr std::size_t kLeaf = 32;

double pairwise_sum_rec(const double* x, std::size_t n) {
  if (n <= kLeaf) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum_rec(x, half) + pairwise_sum_rec(x + half, n - half);
}

double pairwise_transformed(std::span<const double> x, double shift, int power) {
  // Sum of (x - shift)^power without materializing the transformed array.
  std::vector<double> tmp(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - shift;
    double v = d;
    for (int p = 1; p < power; ++p) v *= d;
    tmp[i] = v;
  }
  return pairwise_sum_rec(tmp.data(), tmp.size());
}

}  // namespace

double pairwise_sum(std::span<const double> x) { return pairwise_sum_rec(x.data(), x.size()); }

MCEstimate mc_estimate(std::span<const double> values) {
  const auto n = static_cast<long long>(values.size());
  if (n < 2) throw ValidationError("mc_estimate: need at least 2 values");
  const double mean = pairwise_sum(values) / static_cast<double>(n);
  const double ss = pairwise_transformed(values, mean, 2);
  const double var = ss / static_cast<double>(n - 1);
  return MCEstimate{mean, std::sqrt(std::max(0.0, var / static_cast<double>(n))), n};
}

MCEstimate variance_estimate(std::span<const double> values) {
  const auto n = static_cast<long long>(values.size());
  if (n < 4) throw ValidationError("variance_estimate: need at least 4 values");
  const double nd = static_cast<double>(n);
  const double mean = pairwise_sum(values) / nd;
  const double s2 = pairwise_transformed(values, mean, 2) / (nd - 1.0);
  const double m4 = pairwise_transformed(values, mean, 4) / nd;
  const double var_of_s2 = (m4 - s2 * s2 * (nd - 3.0) / (nd - 1.0)) / nd;
  return MCEstimate{s2, std::sqrt(std::max(0.0, var_of_s2)), n};
}

MCEstimate difference_estimate(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ValidationError("difference_estimate: length mismatch");
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return mc_estimate(d);
}

double quantile(std::vector<double> values, double p) {
  if (values.empty()) throw ValidationError("quantile: empty sample");
  if (p < 0.0 || p > 1.0) throw ValidationError("quantile: p outside [0,1]");
  std::sort(values.begin(), values.end());
  const double h = p * (static_cast<double>(values.size()) - 1.0);
  const auto lo = static_cast<std::size_t>(h);
  if (lo + 1 >= values.size()) return values.back();
  const double frac = h - static_cast<double>(lo);
  return values[lo] * (1.0 - frac) + values[lo + 1] * frac;
}

MCEstimate quantile_estimate(std::vector<double> values, double p) {
  const auto n = static_cast<long long>(values.size());
  if (n < 10) throw ValidationError("quantile_estimate: need at least 10 values");
  std::sort(values.begin(), values.end());
  const double q = [&] {
    const double h = p * (static_cast<double>(n) - 1.0);
    const auto lo = static_cast<std::size_t>(h);
    if (lo + 1 >= values.size()) return values.back();
    const double frac = h - static_cast<double>(lo);
    return values[lo] * (1.0 - frac) + values[lo + 1] * frac;
  }();
  const double spread = std::sqrt(std::max(p * (1.0 - p) / static_cast<double>(n), 0.0));
  auto at = [&](double pp) {
    pp = std::clamp(pp, 0.0, 1.0);
    const double h = pp * (static_cast<double>(n) - 1.0);
    const auto lo = static_cast<std::size_t>(h);
    if (lo + 1 >= values.size()) return values.back();
    const double frac = h - static_cast<double>(lo);
    return values[lo] * (1.0 - frac) + values[lo + 1] * frac;
  };
  const double se = 0.5 * (at(p + spread) - at(p - spread));
  return MCEstimate{q, std::max(se, 0.0), n};
}

}  // namespace eigenchaos
