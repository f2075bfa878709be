#pragma once
#include <optional>
#include <string>
#include <vector>

#include "eigenchaos/matrix.hpp"
#include "eigenchaos/spectral.hpp"

namespace eigenchaos {

// Interpolation grid on [0,1], endpoints included, strictly increasing.
struct PathGrid {
  std::vector<double> points;

  static PathGrid uniform(int q);  // q >= 2 equally spaced points
  void validate() const;
  int q() const { return static_cast<int>(points.size()); }
};

// X(s) = (1-s) X + s Y. Endpoints are returned bit-exact.
SymmetricMatrix path_point(const SymmetricMatrix& X, const SymmetricMatrix& Y, double s);

// Spectral statistics of lambda_alpha along the path, one row per grid
// point. A near-degenerate spectrum at some s flags that row (S_alpha is not
// trustworthy there) instead of aborting the sweep.
struct SweepRow {
  double s = 0.0;
  double lambda_alpha = 0.0;
  double delta_alpha = 0.0;
  double s_alpha = 0.0;
  double m_infty = 0.0;
  bool degenerate = false;
};

struct SweepTable {
  int alpha = 0;
  std::vector<SweepRow> rows;
  double sup_m = 0.0;
  double sup_s_alpha = 0.0;  // +inf when any grid point was degenerate
  double inf_delta = 0.0;
  std::optional<double> first_degenerate_s;
};

SweepTable path_spectrum_sweep(const SymmetricMatrix& X, const SymmetricMatrix& Y,
                               const PathGrid& grid, int alpha);

// CSV with header: s, lambda_alpha, delta_alpha, s_alpha, m_infty.
void write_sweep_csv(const std::string& path, const SweepTable& table);

// Taylor residuals of lambda_alpha between the path endpoints against the
// grid-sup envelopes:
//   lhs0 = |lambda(Y) - lambda(X)|            bound0 = nu |Y-X|_max sup M^2
//   lhs1 = |lambda(Y) - lambda(X) - F'(0)|    bound1 = nu^2 |Y-X|_max^2 sup(S M^4)
// where F'(0) = v_alpha(X)^T (Y-X) v_alpha(X). Y - X must be supported on a
// symmetric index set of size parameter at most nu_B. Near-degenerate grid
// points propagate as errors (the sup would be meaningless).
struct TaylorReport {
  int alpha = 0;
  double lhs0 = 0.0;
  double bound0 = 0.0;
  double lhs1 = 0.0;
  double bound1 = 0.0;
  double fprime0 = 0.0;
};

TaylorReport taylor_residual(const SymmetricMatrix& X, const SymmetricMatrix& Y, int alpha,
                             int nu_B, const PathGrid& grid);

}  // namespace eigenchaos
