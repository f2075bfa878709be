#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "eigenchaos/matrix.hpp"
#include "eigenchaos/partitions.hpp"
#include "eigenchaos/rng.hpp"
#include "eigenchaos/stats.hpp"

namespace eigenchaos {

// Eigenvalue index resolved per matrix size: either a fixed index (1 =
// largest) or a quantile (alpha = ceil(q * n)), so a sweep over n can track
// "edge" or "bulk" coherently.
struct AlphaSpec {
  enum class Mode { index, quantile };
  Mode mode = Mode::index;
  int index = 1;
  double quantile = 0.5;

  int resolve(int n) const;
  void validate() const;
  std::string describe() const;
};

// Matrix ensemble: a named variance profile plus an entry law.
struct EnsembleSpec {
  std::string profile = "goe";  // goe | wigner | checkerboard
  EntryLaw law{};

  VarianceProfile make_profile(int n) const;
  SymmetricMatrix sample(int n, Rng& rng) const;
  void validate() const;
};

// Block partition family, instantiated per n.
struct PartitionSpec {
  std::string family = "entries";  // entries | band
  int width = 2;                   // band only

  AdmissiblePartition make(int n) const;
  void validate() const;
};

// Knobs shared across experiment kinds; each driver reads the subset it
// documents and validates it.
struct ExperimentParams {
  double tau = 1.0;
  double eta = 1.0;
  std::vector<double> u_list;       // ou / pdbou control grid
  std::vector<double> t_list;       // pdbou physical times (alternative to u_list)
  std::vector<double> c_list;       // resampling rescaled control grid
  std::vector<long long> k_list;    // resampling counts (alternative to c_list)
  bool include_full_resample = false;  // append the k = m cell
  bool include_baseline = false;       // append the independent-pair baseline cell
  int path_grid = 33;               // delocalization path-sup grid points
  double epsilon = 0.25;            // delocalization exponent threshold
  double delta = 0.3;               // spacing small-gap exponent
  double rigidity_log_power = 2.0;  // (log n)^L reference curve exponent
};

struct ExperimentConfig {
  std::string kind;  // ou_decorrelation | pdbou_decorrelation | resampling_decorrelation |
                     // eigenvalue_variance | spacing_survey | rigidity_survey |
                     // delocalization_survey
  std::vector<int> n_list;
  AlphaSpec alpha;
  EnsembleSpec ensemble;
  PartitionSpec partition;
  ExperimentParams params;
  long long trials = 100;
  std::uint64_t master_seed = 1;
  std::string output;  // CSV path; empty = in-memory only

  static ExperimentConfig from_json_text(const std::string& text);
  static ExperimentConfig from_json_file(const std::string& path);
  std::string to_json() const;
  void validate() const;
};

// One (n, control) cell of an experiment. control_name says what the control
// value and the statistic mean for this row (e.g. "u" rows carry the mean
// overlap at control u; "median_rescaled_gap" rows carry that quantile).
struct ResultRow {
  std::string kind;
  int n = 0;
  int alpha = 0;
  std::string control_name;
  double control_value = 0.0;
  double mean = 0.0;
  double std_error = 0.0;
  long long trials = 0;
  double wall_ms = 0.0;
};

struct ExperimentResult {
  std::string kind;
  std::vector<ResultRow> rows;
  std::string metadata_json;  // config echo, code version, seed, per-cell notes

  std::string csv() const;  // header: kind,n,alpha,control_name,control_value,mean,std_error,trials,wall_ms
  // Atomic CSV write plus a "<path>.meta.json" sidecar.
  void write(const std::string& csv_path) const;

  const ResultRow* find(int n, const std::string& control_name, double control_value) const;
};

// Dispatches on cfg.kind and, when cfg.output is set, writes the CSV and
// metadata sidecar.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Mean squared eigenvector overlap between a matrix and its flowed copy at
// control u = (1 - e^{-t}) * alpha_hat^{2/3} n^{1/3} (rate-1 flow). Control 0
// is the no-perturbation identity: exactly 1, zero SE.
ExperimentResult run_ou_decorrelation(const ExperimentConfig& cfg);

// Same observable for the block flow across horizon t, reported against
// u = t * eta * min(1, tau)^2 * alpha_hat^{2/3} n^{1/3}; every configured t
// must respect the horizon cap (see pdbou_horizon_cap).
ExperimentResult run_pdbou_decorrelation(const ExperimentConfig& cfg);

// Overlap between X and X^A for a uniform union A of k blocks, reported
// against c = k * nu * alpha_hat^{2/3} n^{-5/3}. Optional extra cells: k = m
// (everything resampled) and the independent-pair baseline.
ExperimentResult run_resampling_decorrelation(const ExperimentConfig& cfg);

// Var(lambda_alpha) rescaled by alpha_hat^{2/3} n^{1/3} per (n, alpha).
ExperimentResult run_eigenvalue_variance(const ExperimentConfig& cfg);

// Per (n, alpha): median of the rescaled minimal gap Delta_alpha * n^{1/6}
// alpha_hat^{1/3}, the small-gap tail frequency
// P(Delta_alpha < n^{-1/6 - delta} alpha_hat^{-1/3}), and the raw minimum.
ExperimentResult run_spacing_survey(const ExperimentConfig& cfg);

// Per (n, beta): 0.99-quantile of |lambda_beta - sqrt(n) gamma_beta| *
// beta_hat^{1/3} n^{1/6} with the (log n)^L reference value, plus the edge
// mean lambda_1 / sqrt(n) when beta = 1.
ExperimentResult run_rigidity_survey(const ExperimentConfig& cfg);

// Per n: distribution of M * n^{1/2} where M is the largest absolute
// eigenvector coordinate, for single matrices and for the sup over a
// one-block resampling path on a uniform grid; pass rates against n^epsilon.
ExperimentResult run_delocalization_survey(const ExperimentConfig& cfg);

// Control-variable mappings (shared with the acceptance suite).
double decorrelation_scale(int n, int alpha);                 // alpha_hat^{2/3} n^{1/3}
double ou_time_for_control(double u, double scale);           // inverse of u = (1 - e^{-t}) scale
double pdbou_control(double t, double eta, double tau, double scale);
double pdbou_horizon_cap(double tau, double eta);             // largest admissible t
long long resample_count_for_control(double c, int nu, int n, int alpha);
double resample_control(long long k, int nu, int n, int alpha);

}  // namespace eigenchaos
