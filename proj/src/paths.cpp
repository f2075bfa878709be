#include "eigenchaos/paths.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "eigenchaos/common.hpp"

namespace eigenchaos {

PathGrid PathGrid::uniform(int q) {
  if (q < 2) throw ValidationError("PathGrid::uniform: need at least 2 points");
  PathGrid g;
  g.points.resize(q);
  for (int i = 0; i < q; ++i) g.points[i] = static_cast<double>(i) / (q - 1);
  g.points.front() = 0.0;
  g.points.back() = 1.0;
  return g;
}

void PathGrid::validate() const {
  if (points.size() < 2) throw ValidationError("path grid: need at least 2 points");
  if (points.front() != 0.0 || points.back() != 1.0) {
    throw ValidationError("path grid: endpoints must be exactly 0 and 1");
  }
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (!(points[i] > points[i - 1])) {
      throw ValidationError("path grid: points must be strictly increasing");
    }
  }
}

SymmetricMatrix path_point(const SymmetricMatrix& X, const SymmetricMatrix& Y, double s) {
  if (X.n() != Y.n()) throw ValidationError("path_point: dimension mismatch");
  if (!(s >= 0.0 && s <= 1.0)) {
    throw ValidationError("path_point: s=" + std::to_string(s) + " outside [0,1]");
  }
  if (s == 0.0) return X;
  if (s == 1.0) return Y;
  int n = X.n();
  SymmetricMatrix Z(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) Z.set(i, j, (1.0 - s) * X(i, j) + s * Y(i, j));
  }
  return Z;
}

namespace {

// Local gap at alpha, one-sided at the edges, computed without the guard so
// degenerate rows can still report their (near-zero) gap.
double delta_at(const std::vector<double>& ev, int alpha) {
  int n = static_cast<int>(ev.size());
  if (n == 1) return std::numeric_limits<double>::infinity();
  if (alpha == 1) return ev[0] - ev[1];
  if (alpha == n) return ev[n - 2] - ev[n - 1];
  return std::min(ev[alpha - 2] - ev[alpha - 1], ev[alpha - 1] - ev[alpha]);
}

}  // namespace

SweepTable path_spectrum_sweep(const SymmetricMatrix& X, const SymmetricMatrix& Y,
                               const PathGrid& grid, int alpha) {
  grid.validate();
  if (alpha < 1 || alpha > X.n()) throw ValidationError("path_spectrum_sweep: alpha out of range");
  SweepTable table;
  table.alpha = alpha;
  table.sup_m = 0.0;
  table.sup_s_alpha = 0.0;
  table.inf_delta = std::numeric_limits<double>::infinity();
  for (double s : grid.points) {
    Spectrum spec = eigh(path_point(X, Y, s));
    SweepRow row;
    row.s = s;
    row.lambda_alpha = spec.eigenvalues[alpha - 1];
    try {
      SpacingStats st = spacing_stats(spec, alpha);
      row.delta_alpha = st.delta_alpha;
      row.s_alpha = st.s_alpha;
      row.m_infty = st.m;
    } catch (const NearDegenerateError&) {
      row.degenerate = true;
      row.delta_alpha = delta_at(spec.eigenvalues, alpha);
      row.s_alpha = std::numeric_limits<double>::infinity();
      double m = 0.0;
      for (double v : spec.vectors) m = std::max(m, std::abs(v));
      row.m_infty = m;
      if (!table.first_degenerate_s) table.first_degenerate_s = s;
    }
    table.sup_m = std::max(table.sup_m, row.m_infty);
    table.sup_s_alpha = std::max(table.sup_s_alpha, row.s_alpha);
    table.inf_delta = std::min(table.inf_delta, row.delta_alpha);
    table.rows.push_back(row);
  }
  return table;
}

void write_sweep_csv(const std::string& path, const SweepTable& table) {
  std::ostringstream out;
  out.precision(17);
  out << "s,lambda_alpha,delta_alpha,s_alpha,m_infty\n";
  for (const SweepRow& r : table.rows) {
    out << r.s << ',' << r.lambda_alpha << ',' << r.delta_alpha << ',' << r.s_alpha << ','
        << r.m_infty << "\n";
  }
  write_text_atomic(path, out.str());
}

TaylorReport taylor_residual(const SymmetricMatrix& X, const SymmetricMatrix& Y, int alpha,
                             int nu_B, const PathGrid& grid) {
  if (X.n() != Y.n()) throw ValidationError("taylor_residual: dimension mismatch");
  if (nu_B < 1) throw ValidationError("taylor_residual: nu_B must be >= 1");
  grid.validate();
  int n = X.n();

  // The difference must fit inside a block of size parameter nu_B; a larger
  // support invalidates the envelopes.
  int support = 0, support_diag = 0;
  double max_norm = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double d = Y(i, j) - X(i, j);
      if (d != 0.0) {
        ++support;
        if (i == j) ++support_diag;
        max_norm = std::max(max_norm, std::abs(d));
      }
    }
  }
  if (support + support_diag > nu_B) {
    throw ValidationError("taylor_residual: Y-X has size parameter " +
                          std::to_string(support + support_diag) + " > declared nu_B=" +
                          std::to_string(nu_B));
  }

  Spectrum sx = eigh(X);
  Spectrum sy = eigh(Y);
  if (alpha < 1 || alpha > n) throw ValidationError("taylor_residual: alpha out of range");

  double fprime0 = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) fprime0 += sx.vec(i, alpha) * (Y(i, j) - X(i, j)) * sx.vec(j, alpha);
  }

  double sup_m2 = 0.0, sup_sm4 = 0.0;
  for (double s : grid.points) {
    Spectrum spec = eigh(path_point(X, Y, s));
    SpacingStats st = spacing_stats(spec, alpha);  // near-degenerate propagates
    double m2 = st.m * st.m;
    sup_m2 = std::max(sup_m2, m2);
    sup_sm4 = std::max(sup_sm4, st.s_alpha * m2 * m2);
  }

  TaylorReport rep;
  rep.alpha = alpha;
  double dl = sy.eigenvalues[alpha - 1] - sx.eigenvalues[alpha - 1];
  rep.lhs0 = std::abs(dl);
  rep.bound0 = nu_B * max_norm * sup_m2;
  rep.lhs1 = std::abs(dl - fprime0);
  rep.bound1 = static_cast<double>(nu_B) * nu_B * max_norm * max_norm * sup_sm4;
  rep.fprime0 = fprime0;
  return rep;
}

}  // namespace eigenchaos
