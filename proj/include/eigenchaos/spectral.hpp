#pragma once
#include "eigenchaos/matrix.hpp"

namespace eigenchaos {

// Mirror index: distance-to-nearest-edge form min(alpha, n+1-alpha).
int hat_index(int alpha, int n);

// Constants of the spacing envelope F(n, alpha): A1 at the edge
// (hat_index == 1), (log n)^{A2 loglog n} in the bulk.
struct FConstants {
  double A1 = 1.0;
  double A2 = 1.01;
  void validate() const;
};

double f_factor(int n, int alpha, const FConstants& consts = FConstants{});

// Gap guard scale for gap-sensitive statistics. Norm is the spectral radius.
double gap_tol(double operator_norm);
double gap_tol(const Spectrum& s);

// Smallest |lambda_alpha - lambda_beta| over beta != alpha (+inf for n=1).
double min_gap(const Spectrum& s, int alpha);

// Squared inner product <v_alpha(X), v_alpha(Y)>^2. Sign-convention
// invariant; returns exactly 1.0 for bit-identical inputs. Throws
// NearDegenerateError when either spectrum has a gap at alpha below the
// guard tolerance.
double overlap_sq(const SymmetricMatrix& X, const SymmetricMatrix& Y, int alpha);
double overlap_sq(const Spectrum& sx, const Spectrum& sy, int alpha);

// Gradient of lambda_alpha with respect to the matrix entries, as a matrix:
// (v_alpha)_i (v_alpha)_j. Rank one, trace one, PSD. Gap-guarded.
SymmetricMatrix eig_grad(const Spectrum& s, int alpha);

// Second derivative d_ij d_ab lambda_alpha via the spectral pseudoinverse
// expansion: P_{ja} (v_alpha)_i (v_alpha)_b + P_{bi} (v_alpha)_j (v_alpha)_a
// with P_{xy} = sum_{beta != alpha} (v_beta)_x (v_beta)_y / (lambda_alpha -
// lambda_beta). Entry indices 0-based; alpha 1-based. Gap-guarded.
double eig_hess(const Spectrum& s, int alpha, int i, int j, int a, int b);

// Spacing statistics at one index: S_alpha = sum_{beta != alpha}
// 1/|lambda_alpha - lambda_beta|, the global sup-norm delocalization measure
// M = max_beta ||v_beta||_inf, and the (one-sided at the edges) local gap
// Delta_alpha. n = 1 yields S = 0, Delta = +inf, M = 1.
struct SpacingStats {
  double s_alpha = 0.0;
  double m = 0.0;
  double delta_alpha = 0.0;
};

SpacingStats spacing_stats(const Spectrum& s, int alpha);

// Grid sup of the largest diagonal resolvent entry of X/sqrt(n):
//   max over w in a uniform grid on [-C, C] and i of |R(w + i eta)_ii|,
// computed from the spectrum. Always <= 1/eta.
double resolvent_diag_max(const SymmetricMatrix& X, double C, double eta, int w_grid = 512);
double resolvent_diag_max(const Spectrum& s, double C, double eta, int w_grid = 512);

// Semicircle tail mass from gamma to the right edge 2.
double semicircle_tail_mass(double gamma);

// Classical location gamma_beta of the beta-th largest eigenvalue under the
// semicircle law: the solution of n * tail_mass(gamma) = beta, by bisection,
// residual <= 1e-8.
double classical_position(int n, int beta);

}  // namespace eigenchaos
