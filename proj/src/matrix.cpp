#include "eigenchaos/matrix.hpp"

#include <Eigen/Dense>

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace eigenchaos {

SymmetricMatrix::SymmetricMatrix(int n) : n_(n) {
  if (n < 1) throw ValidationError("matrix size must be >= 1, got " + std::to_string(n));
  a_.assign(static_cast<std::size_t>(n) * n, 0.0);
}

void SymmetricMatrix::set(int i, int j, double v) {
  a_[static_cast<std::size_t>(i) * n_ + j] = v;
  a_[static_cast<std::size_t>(j) * n_ + i] = v;
}

bool SymmetricMatrix::same_bits(const SymmetricMatrix& other) const {
  if (n_ != other.n_) return false;
  return std::memcmp(a_.data(), other.a_.data(), a_.size() * sizeof(double)) == 0;
}

double SymmetricMatrix::max_abs() const {
  double m = 0.0;
  for (double v : a_) m = std::max(m, std::abs(v));
  return m;
}

double SymmetricMatrix::frobenius_norm() const {
  double s = 0.0;
  for (double v : a_) s += v * v;
  return std::sqrt(s);
}

void SymmetricMatrix::check_finite() const {
  for (double v : a_) {
    if (!std::isfinite(v)) throw ValidationError("matrix contains a non-finite entry");
  }
}

void VarianceProfile::validate() const {
  if (n < 1) throw ValidationError("variance profile: n must be >= 1");
  if (sigma2.size() != static_cast<std::size_t>(n) * n) {
    throw ValidationError("variance profile: wrong buffer size");
  }
  if (!(c1 > 0.0) || !(c2 >= c1)) {
    throw ValidationError("variance profile: need 0 < c1 <= c2");
  }
  for (int i = 0; i < n; ++i) {
    double row_sum = 0.0;
    for (int j = 0; j < n; ++j) {
      double v = at(i, j);
      if (!std::isfinite(v)) throw ValidationError("variance profile: non-finite entry");
      if (v < c1 - 1e-12 || v > c2 + 1e-12) {
        throw ValidationError("variance profile: sigma^2(" + std::to_string(i + 1) + "," +
                              std::to_string(j + 1) + ")=" + std::to_string(v) +
                              " outside [c1,c2]");
      }
      if (std::abs(v - sigma2[static_cast<std::size_t>(j) * n + i]) != 0.0) {
        throw ValidationError("variance profile: not symmetric");
      }
      row_sum += v;
    }
    if (normalized && std::abs(row_sum - n) > 1e-9 * n) {
      throw ValidationError("variance profile: row " + std::to_string(i + 1) +
                            " sums to " + std::to_string(row_sum) + ", expected n=" +
                            std::to_string(n));
    }
  }
}

VarianceProfile VarianceProfile::goe(int n) {
  VarianceProfile p;
  p.n = n;
  p.sigma2.assign(static_cast<std::size_t>(n) * n, 1.0);
  for (int i = 0; i < n; ++i) p.sigma2[static_cast<std::size_t>(i) * n + i] = 2.0;
  p.c1 = 1.0;
  p.c2 = 2.0;
  p.normalized = false;  // rows sum to n+1
  p.validate();
  return p;
}

VarianceProfile VarianceProfile::wigner(int n) {
  VarianceProfile p;
  p.n = n;
  p.sigma2.assign(static_cast<std::size_t>(n) * n, 1.0);
  p.c1 = 1.0;
  p.c2 = 1.0;
  p.normalized = true;
  p.validate();
  return p;
}

VarianceProfile VarianceProfile::checkerboard(int n, double lo, double hi) {
  if (n % 2 != 0) throw ValidationError("checkerboard profile requires even n");
  if (!(lo > 0.0) || !(hi >= lo)) throw ValidationError("checkerboard profile: need 0 < lo <= hi");
  if (std::abs(lo + hi - 2.0) > 1e-12) {
    throw ValidationError("checkerboard profile: lo + hi must equal 2 so rows sum to n");
  }
  VarianceProfile p;
  p.n = n;
  p.sigma2.resize(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      p.sigma2[static_cast<std::size_t>(i) * n + j] = ((i + j) % 2 == 0) ? lo : hi;
    }
  }
  p.c1 = lo;
  p.c2 = hi;
  p.normalized = true;
  p.validate();
  return p;
}

double EntryLaw::sample(Rng& rng) const {
  switch (kind) {
    case Kind::gaussian:
      return rng.normal();
    case Kind::uniform_scaled: {
      // Unif[-sqrt(3), sqrt(3)]: mean 0, variance 1.
      constexpr double kHalfWidth = 1.7320508075688772;
      return kHalfWidth * (2.0 * rng.uniform01() - 1.0);
    }
    case Kind::shifted_bimodal_smoothed: {
      double a = separation;
      double sd = std::sqrt(1.0 - a * a);
      double sign = (rng.uniform01() < 0.5) ? -1.0 : 1.0;
      return sign * a + sd * rng.normal();
    }
  }
  throw ValidationError("unknown entry law");
}

void EntryLaw::validate() const {
  if (kind == Kind::shifted_bimodal_smoothed) {
    if (!(separation > 0.0) || !(separation < 1.0)) {
      throw ValidationError("shifted-bimodal-smoothed law: separation must lie in (0,1)");
    }
  }
}

EntryLaw EntryLaw::parse(const std::string& name) {
  EntryLaw law;
  if (name == "gaussian") {
    law.kind = Kind::gaussian;
  } else if (name == "uniform-scaled") {
    law.kind = Kind::uniform_scaled;
  } else if (name == "shifted-bimodal-smoothed") {
    law.kind = Kind::shifted_bimodal_smoothed;
  } else {
    throw ValidationError("unknown entry law '" + name +
                          "' (expected gaussian, uniform-scaled, or shifted-bimodal-smoothed)");
  }
  return law;
}

std::string EntryLaw::name() const {
  switch (kind) {
    case Kind::gaussian: return "gaussian";
    case Kind::uniform_scaled: return "uniform-scaled";
    case Kind::shifted_bimodal_smoothed: return "shifted-bimodal-smoothed";
  }
  return "?";
}

double Spectrum::operator_norm() const {
  if (eigenvalues.empty()) return 0.0;
  return std::max(std::abs(eigenvalues.front()), std::abs(eigenvalues.back()));
}

SymmetricMatrix sample_generalized_wigner(const VarianceProfile& profile, const EntryLaw& law,
                                          Rng& rng) {
  profile.validate();
  law.validate();
  int n = profile.n;
  SymmetricMatrix X(n);
  // Row-major upper-triangle order, diagonal included. This order is fixed:
  // reproducibility of every downstream experiment depends on it.
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      double sd = std::sqrt(profile.at(i, j));
      X.set(i, j, sd * law.sample(rng));
    }
  }
  return X;
}

SymmetricMatrix sample_goe(int n, Rng& rng) {
  EntryLaw gauss;  // defaults to gaussian
  return sample_generalized_wigner(VarianceProfile::goe(n), gauss, rng);
}

namespace {

// Canonical eigenvector sign: flip so the largest-|.| component is positive;
// among equal magnitudes the lowest index decides (strictly-greater scan).
void canonicalize_sign(double* v, int n) {
  int pivot = 0;
  double best = std::abs(v[0]);
  for (int i = 1; i < n; ++i) {
    double m = std::abs(v[i]);
    if (m > best) {
      best = m;
      pivot = i;
    }
  }
  if (v[pivot] < 0.0) {
    for (int i = 0; i < n; ++i) v[i] = -v[i];
  }
}

Eigen::MatrixXd to_eigen(const SymmetricMatrix& X) {
  int n = X.n();
  Eigen::MatrixXd M(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) M(i, j) = X(i, j);
  }
  return M;
}

}  // namespace

Spectrum eigh(const SymmetricMatrix& X) {
  X.check_finite();
  int n = X.n();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(to_eigen(X));
  if (solver.info() != Eigen::Success) {
    throw EighError("symmetric eigensolver failed to converge (n=" + std::to_string(n) + ")");
  }
  Spectrum s;
  s.n = n;
  s.eigenvalues.resize(n);
  s.vectors.resize(static_cast<std::size_t>(n) * n);
  // Eigen returns ascending order; we store descending (alpha=1 largest).
  for (int alpha = 1; alpha <= n; ++alpha) {
    int src = n - alpha;
    s.eigenvalues[alpha - 1] = solver.eigenvalues()(src);
    double* dst = s.vectors.data() + static_cast<std::size_t>(alpha - 1) * n;
    for (int i = 0; i < n; ++i) dst[i] = solver.eigenvectors()(i, src);
    canonicalize_sign(dst, n);
  }
  return s;
}

std::vector<double> eigh_values(const SymmetricMatrix& X) {
  X.check_finite();
  int n = X.n();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(to_eigen(X), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw EighError("symmetric eigensolver failed to converge (n=" + std::to_string(n) + ")");
  }
  std::vector<double> vals(n);
  for (int alpha = 1; alpha <= n; ++alpha) vals[alpha - 1] = solver.eigenvalues()(n - alpha);
  return vals;
}

double operator_norm(const SymmetricMatrix& X) {
  auto vals = eigh_values(X);
  return std::max(std::abs(vals.front()), std::abs(vals.back()));
}

void write_text_atomic(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot open '" + tmp + "' for writing");
    out << content;
    out.flush();
    if (!out) throw ValidationError("write to '" + tmp + "' failed");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    throw ValidationError("rename '" + tmp + "' -> '" + path + "' failed: " +
                          std::strerror(errno));
  }
}

void write_matrix_text(const std::string& path, const SymmetricMatrix& X) {
  std::ostringstream out;
  out.precision(17);
  int n = X.n();
  out << n << "\n";
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j) out << ' ';
      out << X(i, j);
    }
    out << "\n";
  }
  write_text_atomic(path, out.str());
}

SymmetricMatrix read_matrix_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open matrix file '" + path + "'");
  int n = 0;
  if (!(in >> n) || n < 1) throw ValidationError("matrix file '" + path + "': bad size line");
  SymmetricMatrix X(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double v;
      if (!(in >> v)) {
        throw ValidationError("matrix file '" + path + "': truncated at row " +
                              std::to_string(i + 1));
      }
      if (!std::isfinite(v)) {
        throw ValidationError("matrix file '" + path + "': non-finite entry at (" +
                              std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
      }
      if (j < i) {
        // Lower triangle must match what the upper triangle already set.
        if (v != X(i, j)) {
          throw ValidationError("matrix file '" + path + "': asymmetric at (" +
                                std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
        }
      } else {
        X.set(i, j, v);
      }
    }
  }
  double extra;
  if (in >> extra) throw ValidationError("matrix file '" + path + "': trailing data");
  return X;
}

}  // namespace eigenchaos
