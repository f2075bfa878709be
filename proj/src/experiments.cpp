#include "eigenchaos/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>
#include <utility>

#include "eigenchaos/common.hpp"
#include "eigenchaos/dynamics.hpp"
#include "eigenchaos/identities.hpp"
#include "eigenchaos/paths.hpp"
#include "eigenchaos/spectral.hpp"
#include "eigenchaos/threads.hpp"
#include "eigenchaos/version.hpp"

namespace eigenchaos {
namespace {

using nlohmann::json;

constexpr long long kMaxTrials = (1ll << 32) - 1;

// Shortest decimal that round-trips a double; keeps CSV rows bit-comparable
// across runs without printing 17 digits for simple values.
std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  double back = 0.0;
  for (int prec = 1; prec <= 16; ++prec) {
    char shorter[40];
    std::snprintf(shorter, sizeof(shorter), "%.*g", prec, v);
    std::sscanf(shorter, "%lf", &back);
    if (back == v) return shorter;
  }
  return buf;
}

// Retries the trial body on near-degenerate spectra with forked streams,
// counting each retry (same policy as the identity checkers).
template <typename Body>
auto with_redraws(const Rng& base, std::atomic<long long>& redraws, Body&& body) {
  for (std::uint64_t attempt = 0;; ++attempt) {
    Rng rng = attempt == 0 ? base : base.fork(attempt);
    try {
      return body(rng);
    } catch (const NearDegenerateError&) {
      redraws.fetch_add(1, std::memory_order_relaxed);
      if (attempt >= 64) throw;
    }
  }
}

struct CellResult {
  std::vector<std::vector<double>> cols;
  long long redraws = 0;
  double wall_ms = 0.0;
};

// Runs one Monte Carlo cell: `trials` independent trials, each writing
// `ncols` scalars. Trial k of cell row_id draws from stream row_id*2^32 + k,
// so results are independent of the worker count. Fails if degenerate
// redraws exceed 0.1% of trials.
CellResult run_cell(const ExperimentConfig& cfg, long long row_id, int ncols,
                    const std::function<void(Rng&, double*)>& body) {
  CellResult out;
  const long long trials = cfg.trials;
  out.cols.assign(ncols, std::vector<double>(static_cast<std::size_t>(trials), 0.0));
  std::atomic<long long> redraws{0};
  const auto start = std::chrono::steady_clock::now();
  parallel_trials(trials, [&](long long trial) {
    Rng base(cfg.master_seed, (static_cast<std::uint64_t>(row_id) << 32) |
                                  static_cast<std::uint64_t>(trial));
    with_redraws(base, redraws, [&](Rng& rng) {
      std::vector<double> vals(static_cast<std::size_t>(ncols), 0.0);
      body(rng, vals.data());
      for (int c = 0; c < ncols; ++c) out.cols[c][static_cast<std::size_t>(trial)] = vals[c];
      return 0;
    });
  });
  out.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - start)
                    .count();
  out.redraws = redraws.load();
  if (out.redraws * 1000 > trials) {
    throw CheckFailure("cell " + std::to_string(row_id) + ": " + std::to_string(out.redraws) +
                       " degenerate redraws exceed 0.1% of " + std::to_string(trials) +
                       " trials");
  }
  return out;
}

ResultRow make_row(const ExperimentConfig& cfg, int n, int alpha, const std::string& name,
                   double value, double mean, double se, double wall_ms) {
  ResultRow r;
  r.kind = cfg.kind;
  r.n = n;
  r.alpha = alpha;
  r.control_name = name;
  r.control_value = value;
  r.mean = mean;
  r.std_error = se;
  r.trials = cfg.trials;
  r.wall_ms = wall_ms;
  return r;
}

ExperimentResult finish(const ExperimentConfig& cfg, std::vector<ResultRow> rows,
                        long long redraws) {
  ExperimentResult result;
  result.kind = cfg.kind;
  result.rows = std::move(rows);
  double wall_total = 0.0;
  for (const auto& r : result.rows) wall_total += r.wall_ms;
  json meta;
  meta["config"] = json::parse(cfg.to_json());
  meta["version"] = EIGENCHAOS_VERSION;
  meta["git_hash"] = EIGENCHAOS_GIT_HASH;
  meta["degenerate_redraws"] = redraws;
  meta["rows"] = result.rows.size();
  meta["wall_ms_total"] = wall_total;
  result.metadata_json = meta.dump(2);
  if (!cfg.output.empty()) result.write(cfg.output);
  return result;
}

void require_kind(const ExperimentConfig& cfg, const char* kind) {
  if (cfg.kind != kind) {
    throw ValidationError("config kind '" + cfg.kind + "' does not match driver '" + kind + "'");
  }
}

// Largest |v_alpha(i)| over all eigenvectors and coordinates.
double max_coordinate(const Spectrum& s) {
  double m = 0.0;
  for (int a = 1; a <= s.n; ++a)
    for (int i = 0; i < s.n; ++i) m = std::max(m, std::abs(s.vec(i, a)));
  return m;
}

void check_keys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key())) {
      throw ValidationError(where + ": unknown key '" + item.key() + "'");
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Control-variable mappings

double decorrelation_scale(int n, int alpha) {
  const double hat = static_cast<double>(hat_index(alpha, n));
  return std::pow(hat, 2.0 / 3.0) * std::pow(static_cast<double>(n), 1.0 / 3.0);
}

double ou_time_for_control(double u, double scale) {
  if (!(u >= 0.0)) throw ValidationError("control u must be >= 0");
  if (u >= scale) {
    throw ValidationError("control u=" + std::to_string(u) +
                          " is unreachable: u < alpha_hat^{2/3} n^{1/3} = " +
                          std::to_string(scale) + " is required");
  }
  return -std::log1p(-u / scale);
}

double pdbou_control(double t, double eta, double tau, double scale) {
  const double r = std::min(1.0, tau);
  return t * eta * r * r * scale;
}

double pdbou_horizon_cap(double tau, double eta) { return pdbou_dominance_time_cap(tau, eta); }

long long resample_count_for_control(double c, int nu, int n, int alpha) {
  if (!(c >= 0.0)) throw ValidationError("control c must be >= 0");
  if (nu < 1) throw ValidationError("nu must be >= 1");
  const double per_block = resample_control(1, nu, n, alpha);
  return std::llround(c / per_block);
}

double resample_control(long long k, int nu, int n, int alpha) {
  const double hat = static_cast<double>(hat_index(alpha, n));
  return static_cast<double>(k) * static_cast<double>(nu) * std::pow(hat, 2.0 / 3.0) *
         std::pow(static_cast<double>(n), -5.0 / 3.0);
}

// ---------------------------------------------------------------------------
// Config types

int AlphaSpec::resolve(int n) const {
  validate();
  if (n < 1) throw ValidationError("n must be >= 1");
  int a = 0;
  if (mode == Mode::index) {
    a = index;
  } else {
    a = static_cast<int>(std::ceil(quantile * n));
    if (a < 1) a = 1;
  }
  if (a < 1 || a > n) {
    throw ValidationError("alpha " + describe() + " resolves to " + std::to_string(a) +
                          ", outside [1, " + std::to_string(n) + "]");
  }
  return a;
}

void AlphaSpec::validate() const {
  if (mode == Mode::index) {
    if (index < 1) throw ValidationError("alpha index must be >= 1");
  } else {
    if (!(quantile > 0.0 && quantile <= 1.0)) {
      throw ValidationError("alpha quantile must lie in (0, 1]");
    }
  }
}

std::string AlphaSpec::describe() const {
  if (mode == Mode::index) return "index:" + std::to_string(index);
  return "quantile:" + fmt_double(quantile);
}

VarianceProfile EnsembleSpec::make_profile(int n) const {
  if (profile == "goe") return VarianceProfile::goe(n);
  if (profile == "wigner") return VarianceProfile::wigner(n);
  if (profile == "checkerboard") return VarianceProfile::checkerboard(n);
  throw ValidationError("unknown ensemble profile '" + profile +
                        "' (expected goe, wigner, or checkerboard)");
}

SymmetricMatrix EnsembleSpec::sample(int n, Rng& rng) const {
  return sample_generalized_wigner(make_profile(n), law, rng);
}

void EnsembleSpec::validate() const {
  if (profile != "goe" && profile != "wigner" && profile != "checkerboard") {
    throw ValidationError("unknown ensemble profile '" + profile +
                          "' (expected goe, wigner, or checkerboard)");
  }
  law.validate();
}

AdmissiblePartition PartitionSpec::make(int n) const {
  validate();
  if (family == "entries") return entries_partition(n);
  return band_partition(n, width);
}

void PartitionSpec::validate() const {
  if (family != "entries" && family != "band") {
    throw ValidationError("unknown partition family '" + family + "' (expected entries or band)");
  }
  if (family == "band" && width < 1) throw ValidationError("band width must be >= 1");
}

// ---------------------------------------------------------------------------
// Config parsing

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("config root must be a JSON object");
  ExperimentConfig cfg;
  try {
    check_keys(j, "config", {"kind", "n_list", "alpha", "ensemble", "partition", "params",
                             "trials", "master_seed", "output"});
    cfg.kind = j.at("kind").get<std::string>();
    cfg.n_list = j.at("n_list").get<std::vector<int>>();
    cfg.trials = j.at("trials").get<long long>();
    cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
    cfg.output = j.value("output", std::string());

    if (j.contains("alpha")) {
      const json& a = j["alpha"];
      check_keys(a, "alpha", {"index", "quantile"});
      if (a.contains("index") == a.contains("quantile")) {
        throw ValidationError("alpha must carry exactly one of 'index' or 'quantile'");
      }
      if (a.contains("index")) {
        cfg.alpha.mode = AlphaSpec::Mode::index;
        cfg.alpha.index = a["index"].get<int>();
      } else {
        cfg.alpha.mode = AlphaSpec::Mode::quantile;
        cfg.alpha.quantile = a["quantile"].get<double>();
      }
    }
    if (j.contains("ensemble")) {
      const json& e = j["ensemble"];
      check_keys(e, "ensemble", {"profile", "law"});
      cfg.ensemble.profile = e.value("profile", std::string("goe"));
      if (e.contains("law")) cfg.ensemble.law = EntryLaw::parse(e["law"].get<std::string>());
    }
    if (j.contains("partition")) {
      const json& p = j["partition"];
      check_keys(p, "partition", {"family", "width"});
      cfg.partition.family = p.value("family", std::string("entries"));
      cfg.partition.width = p.value("width", 2);
    }
    if (j.contains("params")) {
      const json& p = j["params"];
      check_keys(p, "params",
                 {"tau", "eta", "u_list", "t_list", "c_list", "k_list", "include_full_resample",
                  "include_baseline", "path_grid", "epsilon", "delta", "rigidity_log_power"});
      cfg.params.tau = p.value("tau", cfg.params.tau);
      cfg.params.eta = p.value("eta", cfg.params.eta);
      if (p.contains("u_list")) cfg.params.u_list = p["u_list"].get<std::vector<double>>();
      if (p.contains("t_list")) cfg.params.t_list = p["t_list"].get<std::vector<double>>();
      if (p.contains("c_list")) cfg.params.c_list = p["c_list"].get<std::vector<double>>();
      if (p.contains("k_list")) cfg.params.k_list = p["k_list"].get<std::vector<long long>>();
      cfg.params.include_full_resample =
          p.value("include_full_resample", cfg.params.include_full_resample);
      cfg.params.include_baseline = p.value("include_baseline", cfg.params.include_baseline);
      cfg.params.path_grid = p.value("path_grid", cfg.params.path_grid);
      cfg.params.epsilon = p.value("epsilon", cfg.params.epsilon);
      cfg.params.delta = p.value("delta", cfg.params.delta);
      cfg.params.rigidity_log_power =
          p.value("rigidity_log_power", cfg.params.rigidity_log_power);
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return from_json_text(buffer.str());
}

std::string ExperimentConfig::to_json() const {
  json j;
  j["kind"] = kind;
  j["n_list"] = n_list;
  if (alpha.mode == AlphaSpec::Mode::index) {
    j["alpha"] = json{{"index", alpha.index}};
  } else {
    j["alpha"] = json{{"quantile", alpha.quantile}};
  }
  j["ensemble"] = json{{"profile", ensemble.profile}, {"law", ensemble.law.name()}};
  if (partition.family == "band") {
    j["partition"] = json{{"family", partition.family}, {"width", partition.width}};
  } else {
    j["partition"] = json{{"family", partition.family}};
  }
  json p;
  p["tau"] = params.tau;
  p["eta"] = params.eta;
  p["u_list"] = params.u_list;
  p["t_list"] = params.t_list;
  p["c_list"] = params.c_list;
  p["k_list"] = params.k_list;
  p["include_full_resample"] = params.include_full_resample;
  p["include_baseline"] = params.include_baseline;
  p["path_grid"] = params.path_grid;
  p["epsilon"] = params.epsilon;
  p["delta"] = params.delta;
  p["rigidity_log_power"] = params.rigidity_log_power;
  j["params"] = p;
  j["trials"] = trials;
  j["master_seed"] = master_seed;
  j["output"] = output;
  return j.dump(2);
}

void ExperimentConfig::validate() const {
  static const std::set<std::string> kinds = {
      "ou_decorrelation",    "pdbou_decorrelation", "resampling_decorrelation",
      "eigenvalue_variance", "spacing_survey",      "rigidity_survey",
      "delocalization_survey"};
  if (!kinds.count(kind)) throw ValidationError("unknown experiment kind '" + kind + "'");
  if (n_list.empty()) throw ValidationError("n_list must be nonempty");
  for (int n : n_list) {
    if (n < 1) throw ValidationError("every n must be >= 1");
  }
  if (trials < 10) throw ValidationError("trials must be >= 10");
  if (trials > kMaxTrials) throw ValidationError("trials must be < 2^32");
  alpha.validate();
  ensemble.validate();
  partition.validate();
  for (int n : n_list) {
    alpha.resolve(n);
    ensemble.make_profile(n);  // surfaces e.g. odd-n checkerboard early
  }
  const ExperimentParams& pr = params;

  const auto need_gaussian = [&] {
    if (ensemble.law.kind != EntryLaw::Kind::gaussian) {
      throw ValidationError(kind + " keeps the ensemble stationary only for law=gaussian");
    }
  };
  const auto reject_lists = [&](bool u, bool t, bool c, bool k) {
    if (u && !pr.u_list.empty()) throw ValidationError(kind + " does not take params.u_list");
    if (t && !pr.t_list.empty()) throw ValidationError(kind + " does not take params.t_list");
    if (c && !pr.c_list.empty()) throw ValidationError(kind + " does not take params.c_list");
    if (k && !pr.k_list.empty()) throw ValidationError(kind + " does not take params.k_list");
  };

  if (kind == "ou_decorrelation") {
    need_gaussian();
    if (pr.u_list.empty()) throw ValidationError("ou_decorrelation requires params.u_list");
    reject_lists(false, true, true, true);
    for (int n : n_list) {
      const double scale = decorrelation_scale(n, alpha.resolve(n));
      for (double u : pr.u_list) ou_time_for_control(u, scale);
    }
  } else if (kind == "pdbou_decorrelation") {
    need_gaussian();
    if (!(pr.tau > 0.0) || !(pr.eta > 0.0)) {
      throw ValidationError("pdbou_decorrelation requires tau > 0 and eta > 0");
    }
    const bool have_u = !pr.u_list.empty();
    const bool have_t = !pr.t_list.empty();
    if (have_u == have_t) {
      throw ValidationError(
          "pdbou_decorrelation requires exactly one of params.u_list or params.t_list");
    }
    reject_lists(false, false, true, true);
    const double cap = pdbou_horizon_cap(pr.tau, pr.eta);
    const double slack = cap * (1.0 + 1e-12);
    const double r = std::min(1.0, pr.tau);
    for (int n : n_list) {
      (void)partition.make(n);
      const double scale = decorrelation_scale(n, alpha.resolve(n));
      for (double u : pr.u_list) {
        if (!(u >= 0.0)) throw ValidationError("control u must be >= 0");
        const double t = u / (pr.eta * r * r * scale);
        if (t > slack) {
          throw ValidationError("control u=" + std::to_string(u) + " needs t=" +
                                std::to_string(t) + " at n=" + std::to_string(n) +
                                ", beyond the horizon cap " + std::to_string(cap));
        }
      }
      for (double t : pr.t_list) {
        if (!(t >= 0.0)) throw ValidationError("every t must be >= 0");
        if (t > slack) {
          throw ValidationError("t=" + std::to_string(t) + " exceeds the horizon cap " +
                                std::to_string(cap));
        }
      }
    }
  } else if (kind == "resampling_decorrelation") {
    const bool have_c = !pr.c_list.empty();
    const bool have_k = !pr.k_list.empty();
    if (have_c == have_k) {
      throw ValidationError(
          "resampling_decorrelation requires exactly one of params.c_list or params.k_list");
    }
    reject_lists(true, true, false, false);
    for (int n : n_list) {
      const AdmissiblePartition p = partition.make(n);
      const int a = alpha.resolve(n);
      const long long m = p.m();
      for (double c : pr.c_list) {
        const long long k = resample_count_for_control(c, p.nu, n, a);
        if (k > m) {
          throw ValidationError("control c=" + std::to_string(c) + " needs k=" +
                                std::to_string(k) + " > m=" + std::to_string(m) +
                                " blocks at n=" + std::to_string(n));
        }
      }
      for (long long k : pr.k_list) {
        if (k < 0 || k > m) {
          throw ValidationError("k=" + std::to_string(k) + " outside [0, m=" +
                                std::to_string(m) + "] at n=" + std::to_string(n));
        }
      }
    }
  } else {
    reject_lists(true, true, true, true);
    if (kind == "spacing_survey") {
      for (int n : n_list) {
        if (n < 2) throw ValidationError("spacing_survey requires n >= 2");
      }
      if (!(pr.delta > 0.0)) throw ValidationError("spacing_survey requires delta > 0");
    } else if (kind == "rigidity_survey") {
      if (!(pr.rigidity_log_power >= 0.0)) {
        throw ValidationError("rigidity_log_power must be >= 0");
      }
    } else if (kind == "delocalization_survey") {
      if (!(pr.epsilon > 0.0 && pr.epsilon < 0.5)) {
        throw ValidationError("epsilon must lie in (0, 0.5)");
      }
      if (pr.path_grid != 0 && pr.path_grid < 2) {
        throw ValidationError("path_grid must be 0 (disabled) or >= 2");
      }
      if (pr.path_grid > 0) {
        for (int n : n_list) (void)partition.make(n);
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Results

std::string ExperimentResult::csv() const {
  std::ostringstream out;
  out << "kind,n,alpha,control_name,control_value,mean,std_error,trials,wall_ms\n";
  for (const ResultRow& r : rows) {
    char wall[32];
    std::snprintf(wall, sizeof(wall), "%.3f", r.wall_ms);
    out << r.kind << ',' << r.n << ',' << r.alpha << ',' << r.control_name << ','
        << fmt_double(r.control_value) << ',' << fmt_double(r.mean) << ','
        << fmt_double(r.std_error) << ',' << r.trials << ',' << wall << '\n';
  }
  return out.str();
}

void ExperimentResult::write(const std::string& csv_path) const {
  write_text_atomic(csv_path, csv());
  write_text_atomic(csv_path + ".meta.json", metadata_json + "\n");
}

const ResultRow* ExperimentResult::find(int n, const std::string& control_name,
                                        double control_value) const {
  for (const ResultRow& r : rows) {
    if (r.n != n || r.control_name != control_name) continue;
    const double tol = 1e-12 * std::max(1.0, std::abs(control_value));
    if (std::abs(r.control_value - control_value) <= tol) return &r;
  }
  return nullptr;
}

// ---------------------------------------------------------------------------
// Decorrelation drivers

ExperimentResult run_ou_decorrelation(const ExperimentConfig& cfg) {
  cfg.validate();
  require_kind(cfg, "ou_decorrelation");
  std::vector<ResultRow> rows;
  long long redraws = 0;
  long long row_id = 0;
  for (int n : cfg.n_list) {
    const int alpha = cfg.alpha.resolve(n);
    const double scale = decorrelation_scale(n, alpha);
    const VarianceProfile profile = cfg.ensemble.make_profile(n);
    for (double u : cfg.params.u_list) {
      const double t = ou_time_for_control(u, scale);
      CellResult cell = run_cell(cfg, row_id++, 1, [&](Rng& rng, double* out) {
        SymmetricMatrix x0 = sample_generalized_wigner(profile, cfg.ensemble.law, rng);
        SymmetricMatrix x1 = ou_advance(x0, t, 1.0, profile, rng);
        out[0] = overlap_sq(x0, x1, alpha);
      });
      const MCEstimate est = mc_estimate(cell.cols[0]);
      rows.push_back(make_row(cfg, n, alpha, "u", u, est.mean, est.std_error, cell.wall_ms));
      redraws += cell.redraws;
    }
  }
  return finish(cfg, std::move(rows), redraws);
}

ExperimentResult run_pdbou_decorrelation(const ExperimentConfig& cfg) {
  cfg.validate();
  require_kind(cfg, "pdbou_decorrelation");
  const double tau = cfg.params.tau;
  const double eta = cfg.params.eta;
  const double r = std::min(1.0, tau);
  std::vector<ResultRow> rows;
  long long redraws = 0;
  long long row_id = 0;
  for (int n : cfg.n_list) {
    const int alpha = cfg.alpha.resolve(n);
    const double scale = decorrelation_scale(n, alpha);
    const double factor = eta * r * r * scale;
    const VarianceProfile profile = cfg.ensemble.make_profile(n);
    const AdmissiblePartition p = cfg.partition.make(n);
    // (u, t) cells: u is the reported control either way.
    std::vector<std::pair<double, double>> grid;
    if (!cfg.params.u_list.empty()) {
      for (double u : cfg.params.u_list) grid.emplace_back(u, u / factor);
    } else {
      for (double t : cfg.params.t_list) grid.emplace_back(pdbou_control(t, eta, tau, scale), t);
    }
    for (const auto& [u, t] : grid) {
      CellResult cell = run_cell(cfg, row_id++, 1, [&, t = t](Rng& rng, double* out) {
        SymmetricMatrix g = sample_generalized_wigner(profile, cfg.ensemble.law, rng);
        const RingCounts counts = pdbou_ring_counts(p, eta, t, rng);
        const PdbouPair pair = pdbou_sample_pair(g, counts, tau, profile, rng);
        out[0] = overlap_sq(g, pair.g_k, alpha);
      });
      const MCEstimate est = mc_estimate(cell.cols[0]);
      rows.push_back(make_row(cfg, n, alpha, "u", u, est.mean, est.std_error, cell.wall_ms));
      redraws += cell.redraws;
    }
  }
  return finish(cfg, std::move(rows), redraws);
}

ExperimentResult run_resampling_decorrelation(const ExperimentConfig& cfg) {
  cfg.validate();
  require_kind(cfg, "resampling_decorrelation");
  std::vector<ResultRow> rows;
  long long redraws = 0;
  long long row_id = 0;
  for (int n : cfg.n_list) {
    const int alpha = cfg.alpha.resolve(n);
    const VarianceProfile profile = cfg.ensemble.make_profile(n);
    const AdmissiblePartition p = cfg.partition.make(n);
    const long long m = p.m();
    const MatrixSampler sampler = [&](Rng& rng) {
      return sample_generalized_wigner(profile, cfg.ensemble.law, rng);
    };

    std::vector<long long> k_grid;
    if (!cfg.params.c_list.empty()) {
      for (double c : cfg.params.c_list) k_grid.push_back(resample_count_for_control(c, p.nu, n, alpha));
    } else {
      k_grid = cfg.params.k_list;
    }
    if (cfg.params.include_full_resample) k_grid.push_back(m);

    for (long long k : k_grid) {
      CellResult cell = run_cell(cfg, row_id++, 1, [&, k](Rng& rng, double* out) {
        const CoupledPair cp = resample_draw(sampler, p, static_cast<int>(k), rng);
        out[0] = overlap_sq(cp.first, cp.second, alpha);
      });
      const MCEstimate est = mc_estimate(cell.cols[0]);
      rows.push_back(make_row(cfg, n, alpha, "c", resample_control(k, p.nu, n, alpha), est.mean,
                              est.std_error, cell.wall_ms));
      redraws += cell.redraws;
    }
    if (cfg.params.include_baseline) {
      CellResult cell = run_cell(cfg, row_id++, 1, [&](Rng& rng, double* out) {
        const SymmetricMatrix x = sampler(rng);
        const SymmetricMatrix y = sampler(rng);
        out[0] = overlap_sq(x, y, alpha);
      });
      const MCEstimate est = mc_estimate(cell.cols[0]);
      rows.push_back(
          make_row(cfg, n, alpha, "baseline", 0.0, est.mean, est.std_error, cell.wall_ms));
      redraws += cell.redraws;
    }
  }
  return finish(cfg, std::move(rows), redraws);
}

// ---------------------------------------------------------------------------
// Spectral surveys

ExperimentResult run_eigenvalue_variance(const ExperimentConfig& cfg) {
  cfg.validate();
  require_kind(cfg, "eigenvalue_variance");
  std::vector<ResultRow> rows;
  long long redraws = 0;
  long long row_id = 0;
  for (int n : cfg.n_list) {
    const int alpha = cfg.alpha.resolve(n);
    const double factor = decorrelation_scale(n, alpha);  // alpha_hat^{2/3} n^{1/3}
    const VarianceProfile profile = cfg.ensemble.make_profile(n);
    CellResult cell = run_cell(cfg, row_id++, 1, [&](Rng& rng, double* out) {
      const SymmetricMatrix x = sample_generalized_wigner(profile, cfg.ensemble.law, rng);
      out[0] = eigh_values(x)[static_cast<std::size_t>(alpha - 1)];
    });
    const MCEstimate var = variance_estimate(cell.cols[0]);
    rows.push_back(make_row(cfg, n, alpha, "variance_rescaled", factor, var.mean * factor,
                            var.std_error * factor, cell.wall_ms));
    redraws += cell.redraws;
  }
  return finish(cfg, std::move(rows), redraws);
}

ExperimentResult run_spacing_survey(const ExperimentConfig& cfg) {
  cfg.validate();
  require_kind(cfg, "spacing_survey");
  std::vector<ResultRow> rows;
  long long redraws = 0;
  long long row_id = 0;
  for (int n : cfg.n_list) {
    const int alpha = cfg.alpha.resolve(n);
    const double hat = static_cast<double>(hat_index(alpha, n));
    const double rescale = std::pow(n, 1.0 / 6.0) * std::pow(hat, 1.0 / 3.0);
    const double small_gap = std::pow(n, -1.0 / 6.0 - cfg.params.delta) * std::pow(hat, -1.0 / 3.0);
    const VarianceProfile profile = cfg.ensemble.make_profile(n);
    CellResult cell = run_cell(cfg, row_id++, 1, [&](Rng& rng, double* out) {
      const SymmetricMatrix x = sample_generalized_wigner(profile, cfg.ensemble.law, rng);
      const std::vector<double> vals = eigh_values(x);
      double gap = std::numeric_limits<double>::infinity();
      if (alpha > 1) gap = std::min(gap, vals[alpha - 2] - vals[alpha - 1]);
      if (alpha < n) gap = std::min(gap, vals[alpha - 1] - vals[alpha]);
      out[0] = gap;
    });
    std::vector<double> rescaled(cell.cols[0].size());
    std::vector<double> tail(cell.cols[0].size());
    for (std::size_t i = 0; i < cell.cols[0].size(); ++i) {
      rescaled[i] = cell.cols[0][i] * rescale;
      tail[i] = cell.cols[0][i] < small_gap ? 1.0 : 0.0;
    }
    const MCEstimate median = quantile_estimate(rescaled, 0.5);
    const MCEstimate freq = mc_estimate(tail);
    const double min_rescaled = *std::min_element(rescaled.begin(), rescaled.end());
    rows.push_back(make_row(cfg, n, alpha, "rescaled_gap_quantile", 0.5, median.mean,
                            median.std_error, cell.wall_ms));
    rows.push_back(
        make_row(cfg, n, alpha, "rescaled_gap_quantile", 0.0, min_rescaled, 0.0, cell.wall_ms));
    rows.push_back(make_row(cfg, n, alpha, "small_gap_freq", cfg.params.delta, freq.mean,
                            freq.std_error, cell.wall_ms));
    redraws += cell.redraws;
  }
  return finish(cfg, std::move(rows), redraws);
}

ExperimentResult run_rigidity_survey(const ExperimentConfig& cfg) {
  cfg.validate();
  require_kind(cfg, "rigidity_survey");
  std::vector<ResultRow> rows;
  long long redraws = 0;
  long long row_id = 0;
  for (int n : cfg.n_list) {
    const int beta = cfg.alpha.resolve(n);
    const double hat = static_cast<double>(hat_index(beta, n));
    const double rescale = std::pow(hat, 1.0 / 3.0) * std::pow(n, 1.0 / 6.0);
    const double center = std::sqrt(static_cast<double>(n)) * classical_position(n, beta);
    const bool edge = beta == 1;
    const VarianceProfile profile = cfg.ensemble.make_profile(n);
    CellResult cell = run_cell(cfg, row_id++, edge ? 2 : 1, [&](Rng& rng, double* out) {
      const SymmetricMatrix x = sample_generalized_wigner(profile, cfg.ensemble.law, rng);
      const std::vector<double> vals = eigh_values(x);
      out[0] = std::abs(vals[static_cast<std::size_t>(beta - 1)] - center) * rescale;
      if (edge) out[1] = vals[0] / std::sqrt(static_cast<double>(n));
    });
    const MCEstimate q99 = quantile_estimate(cell.cols[0], 0.99);
    rows.push_back(make_row(cfg, n, beta, "rescaled_dev_quantile", 0.99, q99.mean, q99.std_error,
                            cell.wall_ms));
    const double bound = std::pow(std::log(static_cast<double>(n)), cfg.params.rigidity_log_power);
    rows.push_back(make_row(cfg, n, beta, "log_power_bound", cfg.params.rigidity_log_power, bound,
                            0.0, cell.wall_ms));
    if (edge) {
      const MCEstimate mean_edge = mc_estimate(cell.cols[1]);
      rows.push_back(make_row(cfg, n, beta, "edge_mean", 0.0, mean_edge.mean,
                              mean_edge.std_error, cell.wall_ms));
    }
    redraws += cell.redraws;
  }
  return finish(cfg, std::move(rows), redraws);
}

ExperimentResult run_delocalization_survey(const ExperimentConfig& cfg) {
  cfg.validate();
  require_kind(cfg, "delocalization_survey");
  std::vector<ResultRow> rows;
  long long redraws = 0;
  long long row_id = 0;
  for (int n : cfg.n_list) {
    const int alpha = cfg.alpha.resolve(n);
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    const double threshold = std::pow(static_cast<double>(n), cfg.params.epsilon);
    const VarianceProfile profile = cfg.ensemble.make_profile(n);

    CellResult cell = run_cell(cfg, row_id++, 1, [&](Rng& rng, double* out) {
      const SymmetricMatrix x = sample_generalized_wigner(profile, cfg.ensemble.law, rng);
      out[0] = max_coordinate(eigh(x)) * sqrt_n;
    });
    std::vector<double> pass(cell.cols[0].size());
    for (std::size_t i = 0; i < pass.size(); ++i) {
      pass[i] = cell.cols[0][i] <= threshold ? 1.0 : 0.0;
    }
    const MCEstimate rate = mc_estimate(pass);
    const auto [lo, hi] = std::minmax_element(cell.cols[0].begin(), cell.cols[0].end());
    const MCEstimate q99 = quantile_estimate(cell.cols[0], 0.99);
    rows.push_back(make_row(cfg, n, alpha, "pass_rate", cfg.params.epsilon, rate.mean,
                            rate.std_error, cell.wall_ms));
    rows.push_back(make_row(cfg, n, alpha, "rescaled_sup_quantile", 1.0, *hi, 0.0, cell.wall_ms));
    rows.push_back(make_row(cfg, n, alpha, "rescaled_sup_quantile", 0.99, q99.mean,
                            q99.std_error, cell.wall_ms));
    rows.push_back(make_row(cfg, n, alpha, "rescaled_sup_quantile", 0.0, *lo, 0.0, cell.wall_ms));
    redraws += cell.redraws;

    if (cfg.params.path_grid > 0) {
      const AdmissiblePartition p = cfg.partition.make(n);
      const PathGrid grid = PathGrid::uniform(cfg.params.path_grid);
      const MatrixSampler sampler = [&](Rng& rng) {
        return sample_generalized_wigner(profile, cfg.ensemble.law, rng);
      };
      CellResult path_cell = run_cell(cfg, row_id++, 1, [&](Rng& rng, double* out) {
        const CoupledPair cp = resample_draw(sampler, p, 1, rng);
        double sup = 0.0;
        for (double s : grid.points) {
          const SymmetricMatrix z = path_point(cp.first, cp.second, s);
          sup = std::max(sup, max_coordinate(eigh(z)));
        }
        out[0] = sup * sqrt_n;
      });
      std::vector<double> pass_path(path_cell.cols[0].size());
      for (std::size_t i = 0; i < pass_path.size(); ++i) {
        pass_path[i] = path_cell.cols[0][i] <= threshold ? 1.0 : 0.0;
      }
      const MCEstimate path_rate = mc_estimate(pass_path);
      const double path_sup =
          *std::max_element(path_cell.cols[0].begin(), path_cell.cols[0].end());
      const MCEstimate path_q99 = quantile_estimate(path_cell.cols[0], 0.99);
      rows.push_back(make_row(cfg, n, alpha, "pass_rate_path", cfg.params.epsilon,
                              path_rate.mean, path_rate.std_error, path_cell.wall_ms));
      rows.push_back(make_row(cfg, n, alpha, "rescaled_sup_path_quantile", 1.0, path_sup, 0.0,
                              path_cell.wall_ms));
      rows.push_back(make_row(cfg, n, alpha, "rescaled_sup_path_quantile", 0.99, path_q99.mean,
                              path_q99.std_error, path_cell.wall_ms));
      redraws += path_cell.redraws;
    }
  }
  return finish(cfg, std::move(rows), redraws);
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.kind == "ou_decorrelation") return run_ou_decorrelation(cfg);
  if (cfg.kind == "pdbou_decorrelation") return run_pdbou_decorrelation(cfg);
  if (cfg.kind == "resampling_decorrelation") return run_resampling_decorrelation(cfg);
  if (cfg.kind == "eigenvalue_variance") return run_eigenvalue_variance(cfg);
  if (cfg.kind == "spacing_survey") return run_spacing_survey(cfg);
  if (cfg.kind == "rigidity_survey") return run_rigidity_survey(cfg);
  return run_delocalization_survey(cfg);
}

}  // namespace eigenchaos
