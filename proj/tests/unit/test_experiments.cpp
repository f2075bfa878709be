#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "doctest.h"
#include "eigenchaos/common.hpp"
#include "eigenchaos/experiments.hpp"
#include "eigenchaos/threads.hpp"

using namespace eigenchaos;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path(name) {}
  ~TempFile() {
    std::remove(path.c_str());
    std::remove((path + ".meta.json").c_str());
  }
};

// Restores the automatic worker cap even if a CHECK fails mid-case.
struct ThreadBudgetGuard {
  ~ThreadBudgetGuard() { set_thread_budget(0); }
};

ExperimentConfig small_ou_config() {
  ExperimentConfig cfg;
  cfg.kind = "ou_decorrelation";
  cfg.n_list = {8};
  cfg.alpha.mode = AlphaSpec::Mode::index;
  cfg.alpha.index = 1;
  cfg.params.u_list = {0.0, 0.8};
  cfg.trials = 200;
  cfg.master_seed = 7;
  return cfg;
}

}  // namespace

TEST_SUITE("experiments") {

TEST_CASE("alpha spec resolves indices and quantiles") {
  AlphaSpec idx;
  idx.mode = AlphaSpec::Mode::index;
  idx.index = 3;
  CHECK(idx.resolve(10) == 3);
  idx.validate();

  AlphaSpec q;
  q.mode = AlphaSpec::Mode::quantile;
  q.quantile = 0.5;
  CHECK(q.resolve(10) == 5);
  CHECK(q.resolve(9) == 5);  // ceil(4.5)
  q.quantile = 1.0;
  CHECK(q.resolve(10) == 10);
  q.quantile = 0.001;
  CHECK(q.resolve(10) == 1);
  CHECK_FALSE(q.describe().empty());

  AlphaSpec bad;
  bad.index = 0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad.mode = AlphaSpec::Mode::quantile;
  bad.quantile = 1.5;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("ensemble and partition specs instantiate per n") {
  EnsembleSpec ens;
  ens.profile = "checkerboard";
  const VarianceProfile prof = ens.make_profile(4);
  CHECK(prof.at(0, 0) == 0.5);
  ens.validate();
  ens.profile = "other";
  CHECK_THROWS_AS(ens.validate(), ValidationError);

  Rng a(3, 1);
  Rng b(3, 1);
  EnsembleSpec goe;
  const SymmetricMatrix via_spec = goe.sample(5, a);
  const SymmetricMatrix direct = sample_generalized_wigner(goe.make_profile(5), goe.law, b);
  CHECK(via_spec.same_bits(direct));

  PartitionSpec entries;
  CHECK(entries.make(4).m() == 10);
  PartitionSpec band;
  band.family = "band";
  band.width = 2;
  CHECK(band.make(8).m() == 9);
  band.family = "hex";
  CHECK_THROWS_AS(band.validate(), ValidationError);
}

TEST_CASE("config json round trip") {
  ExperimentConfig cfg = small_ou_config();
  cfg.output = "result.csv";
  const std::string text = cfg.to_json();
  const ExperimentConfig back = ExperimentConfig::from_json_text(text);
  CHECK(back.to_json() == text);
  CHECK(back.kind == "ou_decorrelation");
  CHECK(back.n_list == std::vector<int>{8});
  CHECK(back.trials == 200);
  CHECK(back.master_seed == 7);
  CHECK(back.output == "result.csv");

  CHECK_THROWS_AS((void)ExperimentConfig::from_json_text("{ not json"), ValidationError);
  CHECK_THROWS_AS((void)ExperimentConfig::from_json_file("missing_config.json"), ValidationError);

  ExperimentConfig bad = small_ou_config();
  bad.kind = "unknown_kind";
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = small_ou_config();
  bad.n_list.clear();
  CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("ou decorrelation: control zero is the exact identity") {
  const ExperimentResult res = run_experiment(small_ou_config());
  REQUIRE(res.rows.size() == 2);
  CHECK(res.rows[0].control_name == "u");
  CHECK(res.rows[0].control_value == 0.0);
  CHECK(res.rows[0].mean == 1.0);
  CHECK(res.rows[0].std_error == 0.0);
  CHECK(res.rows[1].mean > 0.0);
  CHECK(res.rows[1].mean < 1.0);
  CHECK(res.rows[1].trials == 200);
  CHECK_FALSE(res.metadata_json.empty());
  CHECK(res.metadata_json.find("master_seed") != std::string::npos);
  CHECK(res.find(8, "u", 0.8) != nullptr);
  CHECK(res.find(8, "u", 0.9) == nullptr);

  const std::string csv = res.csv();
  CHECK(csv.rfind("kind,n,alpha,control_name,control_value,mean,std_error,trials,wall_ms\n", 0) ==
        0);
}

TEST_CASE("results are bit-identical across worker counts") {
  ThreadBudgetGuard guard;
  const ExperimentConfig cfg = small_ou_config();
  set_thread_budget(1);
  const ExperimentResult serial = run_experiment(cfg);
  set_thread_budget(3);
  const ExperimentResult threaded = run_experiment(cfg);
  REQUIRE(serial.rows.size() == threaded.rows.size());
  for (std::size_t i = 0; i < serial.rows.size(); ++i) {
    CHECK(serial.rows[i].mean == threaded.rows[i].mean);
    CHECK(serial.rows[i].std_error == threaded.rows[i].std_error);
    CHECK(serial.rows[i].control_value == threaded.rows[i].control_value);
  }
}

TEST_CASE("experiment output lands atomically with a metadata sidecar") {
  TempFile f("tmp_experiment.csv");
  ExperimentConfig cfg = small_ou_config();
  cfg.output = f.path;
  (void)run_experiment(cfg);
  FILE* fp = std::fopen(f.path.c_str(), "rb");
  REQUIRE(fp != nullptr);
  std::fclose(fp);
  fp = std::fopen((f.path + ".meta.json").c_str(), "rb");
  REQUIRE(fp != nullptr);
  std::fclose(fp);
}

TEST_CASE("resampling decorrelation emits grid, full-resample, and baseline cells") {
  ExperimentConfig cfg;
  cfg.kind = "resampling_decorrelation";
  cfg.n_list = {8};
  cfg.params.c_list = {0.0, 1.0};
  cfg.params.include_full_resample = true;
  cfg.params.include_baseline = true;
  cfg.trials = 150;
  cfg.master_seed = 9;
  const ExperimentResult res = run_experiment(cfg);
  REQUIRE(res.rows.size() == 4);
  CHECK(res.rows[0].control_value == 0.0);
  CHECK(res.rows[0].mean == 1.0);  // k = 0 never touches the matrix
  CHECK(res.rows[0].std_error == 0.0);
  CHECK(res.rows[2].control_name == "c");  // k = m cell
  CHECK(res.rows[3].control_name == "baseline");
  CHECK(res.rows[1].mean < 1.0);
  CHECK(res.rows[3].mean < 0.6);

  ExperimentConfig both = cfg;
  both.params.k_list = {1};
  CHECK_THROWS_AS(both.validate(), ValidationError);  // c_list and k_list together
}

TEST_CASE("pdbou decorrelation reports the same cells for u- and t-parameterizations") {
  ExperimentConfig by_u;
  by_u.kind = "pdbou_decorrelation";
  by_u.n_list = {8};
  by_u.params.tau = 1.0;
  by_u.params.eta = 1.0;
  by_u.params.u_list = {0.5};
  by_u.trials = 100;
  by_u.master_seed = 13;

  const double scale = decorrelation_scale(8, 1);
  const double factor = 1.0 * 1.0 * 1.0 * scale;  // eta * min(1,tau)^2 * scale
  ExperimentConfig by_t = by_u;
  by_t.params.u_list.clear();
  by_t.params.t_list = {0.5 / factor};

  const ExperimentResult res_u = run_experiment(by_u);
  const ExperimentResult res_t = run_experiment(by_t);
  REQUIRE(res_u.rows.size() == 1);
  REQUIRE(res_t.rows.size() == 1);
  CHECK(res_u.rows[0].mean == res_t.rows[0].mean);  // identical streams
  CHECK(res_u.rows[0].control_value == doctest::Approx(res_t.rows[0].control_value).epsilon(1e-12));

  ExperimentConfig beyond = by_t;
  beyond.params.t_list = {pdbou_horizon_cap(1.0, 1.0) * 1.5};
  CHECK_THROWS_AS(beyond.validate(), ValidationError);
}

TEST_CASE("eigenvalue variance survey emits one rescaled row per n") {
  ExperimentConfig cfg;
  cfg.kind = "eigenvalue_variance";
  cfg.n_list = {8, 16};
  cfg.trials = 300;
  cfg.master_seed = 17;
  const ExperimentResult res = run_experiment(cfg);
  REQUIRE(res.rows.size() == 2);
  for (const ResultRow& r : res.rows) {
    CHECK(r.control_name == "variance_rescaled");
    CHECK(r.mean > 0.0);
    CHECK(r.std_error > 0.0);
  }
  CHECK(res.rows[0].n == 8);
  CHECK(res.rows[1].n == 16);
}

TEST_CASE("spacing survey reports quantile, minimum, and tail frequency") {
  ExperimentConfig cfg;
  cfg.kind = "spacing_survey";
  cfg.n_list = {16};
  cfg.trials = 60;
  cfg.master_seed = 19;
  const ExperimentResult res = run_experiment(cfg);
  REQUIRE(res.rows.size() == 3);
  CHECK(res.rows[0].control_name == "rescaled_gap_quantile");
  CHECK(res.rows[0].control_value == 0.5);
  CHECK(res.rows[1].control_value == 0.0);
  CHECK(res.rows[2].control_name == "small_gap_freq");
  CHECK(res.rows[0].mean >= res.rows[1].mean);  // median >= minimum
  CHECK(res.rows[2].mean >= 0.0);
  CHECK(res.rows[2].mean <= 1.0);
}

TEST_CASE("rigidity survey pairs deviations with the reference bound") {
  ExperimentConfig cfg;
  cfg.kind = "rigidity_survey";
  cfg.n_list = {16};
  cfg.trials = 60;
  cfg.master_seed = 23;
  const ExperimentResult res = run_experiment(cfg);
  REQUIRE(res.rows.size() == 3);  // quantile, bound, edge mean
  CHECK(res.rows[0].control_name == "rescaled_dev_quantile");
  CHECK(res.rows[1].control_name == "log_power_bound");
  CHECK(res.rows[1].mean ==
        doctest::Approx(std::pow(std::log(16.0), 2.0)).epsilon(1e-12));
  CHECK(res.rows[2].control_name == "edge_mean");
  // lambda_1 / sqrt(n) concentrates near the semicircle edge at 2.
  CHECK(res.rows[2].mean > 1.6);
  CHECK(res.rows[2].mean < 2.4);
}

TEST_CASE("delocalization survey orders its quantile rows") {
  ExperimentConfig cfg;
  cfg.kind = "delocalization_survey";
  cfg.n_list = {16};
  cfg.trials = 40;
  cfg.params.path_grid = 5;
  cfg.master_seed = 29;
  const ExperimentResult res = run_experiment(cfg);
  REQUIRE(res.rows.size() == 7);
  CHECK(res.rows[0].control_name == "pass_rate");
  CHECK(res.rows[1].control_name == "rescaled_sup_quantile");
  CHECK(res.rows[1].control_value == 1.0);
  CHECK(res.rows[2].control_value == 0.99);
  CHECK(res.rows[3].control_value == 0.0);
  CHECK(res.rows[3].mean <= res.rows[2].mean);
  CHECK(res.rows[2].mean <= res.rows[1].mean);
  CHECK(res.rows[4].control_name == "pass_rate_path");
  CHECK(res.rows[5].control_name == "rescaled_sup_path_quantile");
  CHECK(res.rows[5].control_value == 1.0);
  CHECK(res.rows[6].control_value == 0.99);
  CHECK(res.rows[6].mean <= res.rows[5].mean);  // q99 <= max within the cell

  ExperimentConfig no_path = cfg;
  no_path.params.path_grid = 0;
  const ExperimentResult flat = run_experiment(no_path);
  CHECK(flat.rows.size() == 4);
}

TEST_CASE("control mappings invert each other") {
  CHECK(decorrelation_scale(64, 1) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(decorrelation_scale(64, 64) == doctest::Approx(4.0).epsilon(1e-12));  // mirrored edge
  CHECK(decorrelation_scale(64, 32) ==
        doctest::Approx(std::pow(32.0, 2.0 / 3.0) * 4.0).epsilon(1e-12));

  const double scale = decorrelation_scale(64, 1);
  CHECK(ou_time_for_control(0.0, scale) == 0.0);
  const double t = ou_time_for_control(3.0, scale);
  CHECK((1.0 - std::exp(-t)) * scale == doctest::Approx(3.0).epsilon(1e-12));
  CHECK_THROWS_AS((void)ou_time_for_control(4.0, scale), ValidationError);  // u >= scale

  CHECK(pdbou_control(0.5, 2.0, 3.0, scale) == doctest::Approx(0.5 * 2.0 * 1.0 * scale).epsilon(1e-12));
  CHECK(pdbou_control(0.5, 2.0, 0.5, scale) ==
        doctest::Approx(0.5 * 2.0 * 0.25 * scale).epsilon(1e-12));

  for (long long k : {0LL, 1LL, 5LL, 10LL}) {
    CHECK(resample_count_for_control(resample_control(k, 2, 4, 1), 2, 4, 1) == k);
  }
  CHECK(resample_control(0, 2, 4, 1) == 0.0);
}

}  // TEST_SUITE
