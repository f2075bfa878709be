#include "eigenchaos/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "eigenchaos/common.hpp"

namespace eigenchaos {

int hat_index(int alpha, int n) {
  if (alpha < 1 || alpha > n) {
    throw ValidationError("hat_index: alpha=" + std::to_string(alpha) + " outside [1," +
                          std::to_string(n) + "]");
  }
  return std::min(alpha, n + 1 - alpha);
}

void FConstants::validate() const {
  if (!(A1 > 0.0)) throw ValidationError("FConstants: A1 must be > 0");
  if (!(A2 > 1.0)) throw ValidationError("FConstants: A2 must be > 1");
}

double f_factor(int n, int alpha, const FConstants& consts) {
  consts.validate();
  if (n < 3) throw ValidationError("f_factor: n must be >= 3 so log log n > 0");
  if (hat_index(alpha, n) == 1) return consts.A1;
  double ln = std::log(static_cast<double>(n));
  return std::pow(ln, consts.A2 * std::log(ln));
}

double gap_tol(double operator_norm) { return 1e-10 * (1.0 + operator_norm); }

double gap_tol(const Spectrum& s) { return gap_tol(s.operator_norm()); }

double min_gap(const Spectrum& s, int alpha) {
  int n = s.n;
  if (alpha < 1 || alpha > n) {
    throw ValidationError("min_gap: alpha=" + std::to_string(alpha) + " outside [1," +
                          std::to_string(n) + "]");
  }
  if (n == 1) return std::numeric_limits<double>::infinity();
  // Eigenvalues are sorted descending, so the closest neighbors are adjacent.
  double g = std::numeric_limits<double>::infinity();
  if (alpha > 1) g = std::min(g, s.eigenvalues[alpha - 2] - s.eigenvalues[alpha - 1]);
  if (alpha < n) g = std::min(g, s.eigenvalues[alpha - 1] - s.eigenvalues[alpha]);
  return g;
}

namespace {

void guard_gap(const Spectrum& s, int alpha) {
  double tol = gap_tol(s);
  double g = min_gap(s, alpha);
  if (g < tol) throw NearDegenerateError(alpha, g, tol);
}

}  // namespace

double overlap_sq(const Spectrum& sx, const Spectrum& sy, int alpha) {
  if (sx.n != sy.n) throw ValidationError("overlap_sq: dimension mismatch");
  guard_gap(sx, alpha);
  guard_gap(sy, alpha);
  double dot = 0.0;
  for (int i = 0; i < sx.n; ++i) dot += sx.vec(i, alpha) * sy.vec(i, alpha);
  double o = dot * dot;
  return std::min(o, 1.0);  // clip the roundoff excess above exact 1
}

double overlap_sq(const SymmetricMatrix& X, const SymmetricMatrix& Y, int alpha) {
  if (X.n() != Y.n()) throw ValidationError("overlap_sq: dimension mismatch");
  if (X.same_bits(Y)) {
    // Identical inputs have overlap exactly 1; still enforce the gap guard
    // so degenerate spectra are reported, not silently scored.
    guard_gap(eigh(X), alpha);
    return 1.0;
  }
  return overlap_sq(eigh(X), eigh(Y), alpha);
}

SymmetricMatrix eig_grad(const Spectrum& s, int alpha) {
  guard_gap(s, alpha);
  int n = s.n;
  SymmetricMatrix g(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) g.set(i, j, s.vec(i, alpha) * s.vec(j, alpha));
  }
  return g;
}

double eig_hess(const Spectrum& s, int alpha, int i, int j, int a, int b) {
  int n = s.n;
  if (alpha < 1 || alpha > n) throw ValidationError("eig_hess: alpha out of range");
  for (int idx : {i, j, a, b}) {
    if (idx < 0 || idx >= n) throw ValidationError("eig_hess: entry index out of range");
  }
  // The expansion divides by every lambda_alpha - lambda_beta, so the guard
  // covers the whole spectrum relative to alpha, not just neighbors.
  double tol = gap_tol(s);
  double la = s.eigenvalues[alpha - 1];
  double pja = 0.0, pbi = 0.0;
  for (int beta = 1; beta <= n; ++beta) {
    if (beta == alpha) continue;
    double d = la - s.eigenvalues[beta - 1];
    if (std::abs(d) < tol) throw NearDegenerateError(alpha, std::abs(d), tol);
    pja += s.vec(j, beta) * s.vec(a, beta) / d;
    pbi += s.vec(b, beta) * s.vec(i, beta) / d;
  }
  return pja * s.vec(i, alpha) * s.vec(b, alpha) + pbi * s.vec(j, alpha) * s.vec(a, alpha);
}

SpacingStats spacing_stats(const Spectrum& s, int alpha) {
  int n = s.n;
  if (alpha < 1 || alpha > n) throw ValidationError("spacing_stats: alpha out of range");
  SpacingStats st;
  if (n == 1) {
    st.s_alpha = 0.0;
    st.m = 1.0;
    st.delta_alpha = std::numeric_limits<double>::infinity();
    return st;
  }
  double tol = gap_tol(s);
  double la = s.eigenvalues[alpha - 1];
  double sum = 0.0;
  for (int beta = 1; beta <= n; ++beta) {
    if (beta == alpha) continue;
    double g = std::abs(la - s.eigenvalues[beta - 1]);
    if (g < tol) throw NearDegenerateError(alpha, g, tol);
    sum += 1.0 / g;
  }
  st.s_alpha = sum;
  double m = 0.0;
  for (double v : s.vectors) m = std::max(m, std::abs(v));
  st.m = m;
  if (alpha == 1) {
    st.delta_alpha = s.eigenvalues[0] - s.eigenvalues[1];
  } else if (alpha == n) {
    st.delta_alpha = s.eigenvalues[n - 2] - s.eigenvalues[n - 1];
  } else {
    st.delta_alpha = std::min(s.eigenvalues[alpha - 2] - s.eigenvalues[alpha - 1],
                              s.eigenvalues[alpha - 1] - s.eigenvalues[alpha]);
  }
  return st;
}

double resolvent_diag_max(const Spectrum& s, double C, double eta, int w_grid) {
  if (!(eta > 0.0)) throw ValidationError("resolvent_diag_max: eta must be > 0");
  if (w_grid < 2) throw ValidationError("resolvent_diag_max: w_grid must be >= 2");
  if (!(C >= 0.0)) throw ValidationError("resolvent_diag_max: C must be >= 0");
  int n = s.n;
  double sqrt_n = std::sqrt(static_cast<double>(n));
  double best = 0.0;
  for (int g = 0; g < w_grid; ++g) {
    double w = -C + 2.0 * C * g / (w_grid - 1);
    for (int i = 0; i < n; ++i) {
      // R_ii(w + i eta) = sum_beta v_i(beta)^2 / (lambda_beta/sqrt(n) - w - i eta)
      double re = 0.0, im = 0.0;
      for (int beta = 1; beta <= n; ++beta) {
        double d = s.eigenvalues[beta - 1] / sqrt_n - w;
        double v2 = s.vec(i, beta) * s.vec(i, beta);
        double denom = d * d + eta * eta;
        re += v2 * d / denom;
        im += v2 * eta / denom;
      }
      best = std::max(best, std::hypot(re, im));
    }
  }
  return best;
}

double resolvent_diag_max(const SymmetricMatrix& X, double C, double eta, int w_grid) {
  return resolvent_diag_max(eigh(X), C, eta, w_grid);
}

double semicircle_tail_mass(double gamma) {
  if (gamma <= -2.0) return 1.0;
  if (gamma >= 2.0) return 0.0;
  constexpr double kPi = 3.14159265358979323846;
  double root = std::sqrt(4.0 - gamma * gamma);
  return (kPi - 0.5 * gamma * root - 2.0 * std::asin(0.5 * gamma)) / (2.0 * kPi);
}

double classical_position(int n, int beta) {
  if (n < 1) throw ValidationError("classical_position: n must be >= 1");
  if (beta < 1 || beta > n) {
    throw ValidationError("classical_position: beta=" + std::to_string(beta) + " outside [1," +
                          std::to_string(n) + "]");
  }
  double target = static_cast<double>(beta) / n;
  if (beta == n) return -2.0;
  // tail_mass is strictly decreasing on [-2, 2]; bisect.
  double lo = -2.0, hi = 2.0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    double mass = semicircle_tail_mass(mid);
    if (std::abs(n * mass - beta) <= 1e-9) return mid;
    if (mass > target) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-15) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace eigenchaos
