#include "eigenchaos/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <vector>

#include "eigenchaos/common.hpp"
#include "eigenchaos/dynamics.hpp"
#include "eigenchaos/identities.hpp"
#include "eigenchaos/matrix.hpp"
#include "eigenchaos/partitions.hpp"
#include "eigenchaos/rng.hpp"
#include "eigenchaos/spectral.hpp"

namespace eigenchaos {
namespace {

// lambda_alpha of X with a symmetric bump of size h at (i, j).
double lambda_bumped(const SymmetricMatrix& X, int alpha, int i, int j, double h) {
  SymmetricMatrix y = X;
  y.set(i, j, X(i, j) + h);
  return eigh_values(y)[static_cast<std::size_t>(alpha - 1)];
}

double lambda_shifted(const SymmetricMatrix& X, const SymmetricMatrix& D, int alpha, double h) {
  SymmetricMatrix y = X;
  for (int i = 0; i < X.n(); ++i)
    for (int j = i; j < X.n(); ++j) y.set(i, j, X(i, j) + h * D(i, j));
  return eigh_values(y)[static_cast<std::size_t>(alpha - 1)];
}

// Richardson-extrapolated central first difference: O(h^4) truncation.
double central_diff(double f_m2h, double f_mh, double f_ph, double f_p2h, double h) {
  const double a_h = (f_ph - f_mh) / (2.0 * h);
  const double a_2h = (f_p2h - f_m2h) / (4.0 * h);
  return (4.0 * a_h - a_2h) / 3.0;
}

// Richardson-extrapolated central second difference.
double central_diff2(double f_m2h, double f_mh, double f0, double f_ph, double f_p2h, double h) {
  const double a_h = (f_ph - 2.0 * f0 + f_mh) / (h * h);
  const double a_2h = (f_p2h - 2.0 * f0 + f_m2h) / (4.0 * h * h);
  return (4.0 * a_h - a_2h) / 3.0;
}

}  // namespace

FdDerivativeReport fd_derivative_check(int n, int alpha, int draws, std::uint64_t seed,
                                       double grad_rel_tol, double hess_rel_tol,
                                       double gap_guard) {
  if (n < 2) throw ValidationError("fd_derivative_check requires n >= 2");
  if (alpha < 1 || alpha > n) throw ValidationError("alpha must be in [1, n]");
  if (draws < 1) throw ValidationError("draws must be >= 1");
  FdDerivativeReport rep;
  rep.n = n;
  rep.alpha = alpha;
  rep.draws = draws;
  rep.grad_tol = grad_rel_tol;
  rep.hess_tol = hess_rel_tol;
  const double h = 1e-3;

  for (int d = 0; d < draws; ++d) {
    // Redraw until the spectrum has a healthy gap at alpha; finite
    // differences need the eigenvalue branch well separated.
    Rng base(seed, static_cast<std::uint64_t>(d));
    SymmetricMatrix x(n);
    Spectrum s;
    for (std::uint64_t attempt = 0;; ++attempt) {
      Rng rng = attempt == 0 ? base : base.fork(attempt);
      x = sample_goe(n, rng);
      s = eigh(x);
      if (min_gap(s, alpha) >= gap_guard * s.operator_norm()) {
        base = rng;  // hessian directions continue from the accepted stream
        break;
      }
      ++rep.redraws;
      if (attempt >= 64) throw CheckFailure("fd_derivative_check: persistent small gaps");
    }

    const SymmetricMatrix grad = eig_grad(s, alpha);
    double scale = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) scale = std::max(scale, std::abs(grad(i, j)));

    // Gradient: every upper-triangle entry against central differences. A
    // symmetric bump at (i, j) moves both mirror positions, so the observed
    // slope is 2 * grad off the diagonal.
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        const double fd = central_diff(lambda_bumped(x, alpha, i, j, -2.0 * h),
                                       lambda_bumped(x, alpha, i, j, -h),
                                       lambda_bumped(x, alpha, i, j, h),
                                       lambda_bumped(x, alpha, i, j, 2.0 * h), h) /
                          (i == j ? 1.0 : 2.0);
        rep.max_grad_err = std::max(rep.max_grad_err, std::abs(fd - grad(i, j)) / scale);
      }
    }

    // Directional second derivatives: the full double sum of analytic
    // second-derivative entries against a central second difference along
    // three random symmetric directions.
    const double f0 = s.eigenvalues[static_cast<std::size_t>(alpha - 1)];
    for (int dir = 0; dir < 3; ++dir) {
      SymmetricMatrix dmat(n);
      double frob = 0.0;
      for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
          dmat.set(i, j, base.normal());
        }
      }
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) frob += dmat(i, j) * dmat(i, j);
      frob = std::sqrt(frob);
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) dmat.set(i, j, dmat(i, j) / frob);

      double analytic = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
              analytic += dmat(i, j) * dmat(a, b) * eig_hess(s, alpha, i, j, a, b);

      const double fd = central_diff2(lambda_shifted(x, dmat, alpha, -2.0 * h),
                                      lambda_shifted(x, dmat, alpha, -h), f0,
                                      lambda_shifted(x, dmat, alpha, h),
                                      lambda_shifted(x, dmat, alpha, 2.0 * h), h);
      const double err = std::abs(fd - analytic) / std::max(std::abs(analytic), 1e-2);
      rep.max_hess_err = std::max(rep.max_hess_err, err);
    }
  }
  rep.passed = rep.max_grad_err <= grad_rel_tol && rep.max_hess_err <= hess_rel_tol;
  return rep;
}

bool OracleReport::all_passed() const {
  for (const OracleCheck& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

std::string OracleReport::summary() const {
  std::ostringstream out;
  for (const OracleCheck& c : checks) {
    char line[256];
    std::snprintf(line, sizeof(line), "[%s] %-28s observed %.3e  limit %.3e  %s\n",
                  c.passed ? "PASS" : "FAIL", c.name.c_str(), c.observed, c.limit,
                  c.detail.c_str());
    out << line;
  }
  out << (all_passed() ? "oracle suite: all checks passed\n" : "oracle suite: FAILURES above\n");
  return out.str();
}

OracleReport oracle_suite(std::uint64_t seed) {
  OracleReport report;

  // 1. Finite-difference derivative oracle at n=8, edge and interior index.
  for (int alpha : {1, 3}) {
    const FdDerivativeReport fd = fd_derivative_check(8, alpha, 10, seed + alpha);
    OracleCheck grad;
    grad.name = "fd_gradient_n8_alpha" + std::to_string(alpha);
    grad.observed = fd.max_grad_err;
    grad.limit = fd.grad_tol;
    grad.passed = fd.max_grad_err <= fd.grad_tol;
    grad.detail = std::to_string(fd.draws) + " draws";
    report.checks.push_back(grad);
    OracleCheck hess;
    hess.name = "fd_hessian_n8_alpha" + std::to_string(alpha);
    hess.observed = fd.max_hess_err;
    hess.limit = fd.hess_tol;
    hess.passed = fd.max_hess_err <= fd.hess_tol;
    hess.detail = "3 directions/draw";
    report.checks.push_back(hess);
  }

  // 2. Eigendecomposition residuals, in units of n * ||X||_max * eps
  // (reconstruction) and n * eps (orthogonality).
  const double eps = std::numeric_limits<double>::epsilon();
  for (int n : {2, 5, 32}) {
    double worst_recon = 0.0;
    double worst_ortho = 0.0;
    int order_violations = 0;
    Rng rng(seed, 1000 + static_cast<std::uint64_t>(n));
    for (int d = 0; d < 5; ++d) {
      const SymmetricMatrix x = sample_goe(n, rng);
      const Spectrum s = eigh(x);
      for (int k = 1; k < n; ++k) {
        if (s.eigenvalues[k - 1] < s.eigenvalues[k]) ++order_violations;
      }
      double recon = 0.0;
      double ortho = 0.0;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          double rij = 0.0;
          double vvij = 0.0;
          for (int a = 1; a <= n; ++a) {
            rij += s.vec(i, a) * s.eigenvalues[a - 1] * s.vec(j, a);
            vvij += s.vec(i, a) * s.vec(j, a);
          }
          recon = std::max(recon, std::abs(rij - x(i, j)));
          ortho = std::max(ortho, std::abs(vvij - (i == j ? 1.0 : 0.0)));
        }
      }
      worst_recon = std::max(worst_recon, recon / (n * std::max(1.0, x.max_abs()) * eps));
      worst_ortho = std::max(worst_ortho, ortho / (n * eps));
    }
    OracleCheck recon;
    recon.name = "eigh_reconstruction_n" + std::to_string(n);
    recon.observed = worst_recon;
    recon.limit = 100.0;
    recon.passed = worst_recon <= recon.limit && order_violations == 0;
    recon.detail = order_violations == 0 ? "5 draws, descending order"
                                         : std::to_string(order_violations) + " order violations";
    report.checks.push_back(recon);
    OracleCheck ortho;
    ortho.name = "eigh_orthogonality_n" + std::to_string(n);
    ortho.observed = worst_ortho;
    ortho.limit = 100.0;
    ortho.passed = worst_ortho <= ortho.limit;
    ortho.detail = "max |V^T V - I|";
    report.checks.push_back(ortho);
  }

  // 3. One-block difference covariance: Monte Carlo against the closed form
  // at reduced trials (z well under 5 when both sides agree).
  {
    const AdmissiblePartition p = entries_partition(4);
    const int block = p.block_of(0, 1);
    double worst_z = 0.0;
    for (int kb : {0, 1}) {
      RingCounts counts{&p, std::vector<int>(static_cast<std::size_t>(p.m()), 0)};
      counts.per_block[static_cast<std::size_t>(block)] = kb;
      const IdentityReport r = pdbou_diff_cov_mc(p, 1.0, counts, block, 20000, seed + 17);
      worst_z = std::max(worst_z, std::abs(r.z_score));
    }
    OracleCheck check;
    check.name = "pdbou_diff_cov_mc";
    check.observed = worst_z;
    check.limit = 5.0;
    check.passed = worst_z <= check.limit;
    check.detail = "K_B in {0,1}, tau=1, 2e4 trials";
    report.checks.push_back(check);
  }

  // 4. Classical positions: n * (semicircle mass above gamma_beta) must give
  // back beta to quadrature accuracy.
  {
    const int n = 100;
    double worst = 0.0;
    for (int beta = 1; beta <= n; ++beta) {
      const double gamma = classical_position(n, beta);
      worst = std::max(worst, std::abs(n * semicircle_tail_mass(gamma) - beta));
    }
    OracleCheck check;
    check.name = "classical_position_n100";
    check.observed = worst;
    check.limit = 1e-8;
    check.passed = worst <= check.limit;
    check.detail = "max |n * tail_mass(gamma_beta) - beta|";
    report.checks.push_back(check);
  }

  return report;
}

}  // namespace eigenchaos
