// Command-line front end: run experiments from config files, check the
// variance identities, validate partitions, sweep interpolation paths, and
// run the fast oracle gate.
//
// Exit codes: 0 success, 1 bad input (flags, configs, files), 2 runtime
// error, 3 substantive check failure (identity z out of range, inadmissible
// partition, oracle failure).
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "eigenchaos/common.hpp"
#include "eigenchaos/experiments.hpp"
#include "eigenchaos/identities.hpp"
#include "eigenchaos/matrix.hpp"
#include "eigenchaos/oracle.hpp"
#include "eigenchaos/partitions.hpp"
#include "eigenchaos/paths.hpp"
#include "eigenchaos/threads.hpp"
#include "eigenchaos/version.hpp"

namespace {

using namespace eigenchaos;

long long as_trials(double trials) {
  if (!(trials >= 2.0) || trials >= 4.3e9) throw ValidationError("trials out of range");
  return static_cast<long long>(std::llround(trials));
}

std::vector<double> uniform_grid(double t_max, int points) {
  if (points < 2) throw ValidationError("grid needs at least 2 points");
  if (!(t_max > 0.0)) throw ValidationError("t-max must be positive");
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) g[static_cast<std::size_t>(i)] = t_max * i / (points - 1);
  g.front() = 0.0;
  g.back() = t_max;
  return g;
}

void maybe_write_json(const std::string& path, const std::string& body) {
  if (!path.empty()) write_text_atomic(path, body + "\n");
}

AdmissiblePartition make_partition(int n, int band_width) {
  return band_width > 0 ? band_partition(n, band_width) : entries_partition(n);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"eigenchaos: eigenvector decorrelation laboratory for random matrix ensembles"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "cap worker threads (fallback: EIGENCHAOS_THREADS)");

  // The selected action, set up by whichever subcommand parsed.
  std::function<int()> action;

  // --- version ------------------------------------------------------------
  auto* version = app.add_subcommand("version", "print code identity");
  version->callback([&] {
    action = [] {
      std::printf("eigenchaos %s (config format %d)\nbuild: %s\n", EIGENCHAOS_VERSION,
                  EIGENCHAOS_CONFIG_FORMAT, EIGENCHAOS_GIT_HASH);
      return 0;
    };
  });

  // --- oracle-suite ---------------------------------------------------------
  auto* oracle = app.add_subcommand("oracle-suite", "fast composed oracle gate");
  auto oracle_seed = std::make_shared<std::uint64_t>(1);
  oracle->add_option("--seed", *oracle_seed, "master seed");
  oracle->callback([&, oracle_seed] {
    action = [oracle_seed] {
      const OracleReport rep = oracle_suite(*oracle_seed);
      std::printf("%s", rep.summary().c_str());
      if (!rep.all_passed()) throw CheckFailure("oracle suite failed");
      return 0;
    };
  });

  // --- validate-partition ---------------------------------------------------
  auto* vp = app.add_subcommand("validate-partition", "check a partition file");
  auto vp_file = std::make_shared<std::string>();
  vp->add_option("--file", *vp_file, "partition file")->required();
  vp->callback([&, vp_file] {
    action = [vp_file] {
      const AdmissiblePartition p = read_partition_text(*vp_file);
      std::printf("partition ok: n=%d m=%d nu=%d\n", p.n, p.m(), p.nu);
      return 0;
    };
  });

  // --- sweep-path -------------------------------------------------------------
  auto* sweep = app.add_subcommand("sweep-path", "spectral statistics along X(s)=(1-s)X+sY");
  struct SweepArgs {
    std::string x_file, y_file, out;
    int alpha = 1;
    int grid = 33;
  };
  auto sa = std::make_shared<SweepArgs>();
  sweep->add_option("--x", sa->x_file, "matrix file for X")->required();
  sweep->add_option("--y", sa->y_file, "matrix file for Y")->required();
  sweep->add_option("--alpha", sa->alpha, "eigenvalue index (1 = largest)");
  sweep->add_option("--grid", sa->grid, "grid points on [0,1]");
  sweep->add_option("--out", sa->out, "CSV output path");
  sweep->callback([&, sa] {
    action = [sa] {
      const SymmetricMatrix x = read_matrix_text(sa->x_file);
      const SymmetricMatrix y = read_matrix_text(sa->y_file);
      const SweepTable table = path_spectrum_sweep(x, y, PathGrid::uniform(sa->grid), sa->alpha);
      if (!sa->out.empty()) {
        write_sweep_csv(sa->out, table);
        std::printf("wrote %s\n", sa->out.c_str());
      }
      std::printf("alpha=%d grid=%d sup_m=%.6g inf_delta=%.6g sup_s_alpha=%.6g%s\n", table.alpha,
                  sa->grid, table.sup_m, table.inf_delta, table.sup_s_alpha,
                  table.first_degenerate_s ? " (degenerate points present)" : "");
      return 0;
    };
  });

  // --- run ---------------------------------------------------------------------
  auto* run = app.add_subcommand("run", "run an experiment from a JSON config");
  auto run_config = std::make_shared<std::string>();
  run->add_option("--config", *run_config, "experiment config (JSON)")->required();
  run->callback([&, run_config] {
    action = [run_config] {
      const ExperimentConfig cfg = ExperimentConfig::from_json_file(*run_config);
      const ExperimentResult result = run_experiment(cfg);
      if (cfg.output.empty()) {
        std::printf("%s", result.csv().c_str());
      } else {
        std::printf("%s: %zu rows\nwrote %s and %s.meta.json\n", result.kind.c_str(),
                    result.rows.size(), cfg.output.c_str(), cfg.output.c_str());
      }
      return 0;
    };
  });

  // --- check-identity -------------------------------------------------------------
  auto* ci = app.add_subcommand("check-identity", "Monte Carlo identity checks");
  ci->require_subcommand(1);

  struct IdArgs {
    int n = 2;
    int alpha = 1;
    double tau = 1.0;
    double eta = 1.0;
    double t = 0.4;
    double t_max = 0.0;  // 0: derived from tau
    int grid_points = 0;
    int kb = 0;
    int band = 0;  // 0: entries partition
    std::string profile = "wigner";
    std::string law = "gaussian";
    double trials = 1e5;
    std::uint64_t seed = 1;
    double z_max = 3.0;
    std::string json;
  };
  auto ia = std::make_shared<IdArgs>();

  const auto add_common = [&](CLI::App* cmd, bool with_alpha = true) {
    cmd->add_option("--n", ia->n, "matrix size");
    if (with_alpha) cmd->add_option("--alpha", ia->alpha, "eigenvalue index");
    cmd->add_option("--trials", ia->trials, "Monte Carlo trials (accepts 1e6)");
    cmd->add_option("--seed", ia->seed, "master seed");
    cmd->add_option("--z-max", ia->z_max, "largest acceptable |z|");
    cmd->add_option("--json", ia->json, "write the full report to this path");
  };

  auto* ci_ou = ci->add_subcommand("ou", "stationary-flow variance identity");
  add_common(ci_ou);
  ci_ou->add_option("--tau", ia->tau, "flow rate");
  ci_ou->add_option("--t-max", ia->t_max, "integral truncation horizon");
  ci_ou->add_option("--grid-points", ia->grid_points, "odd quadrature point count");
  ci_ou->callback([&, ia] {
    action = [ia] {
      const double t_max = ia->t_max > 0.0 ? ia->t_max : 12.0 / ia->tau;
      const int points = ia->grid_points > 0 ? ia->grid_points : 81;
      const IdentityReport rep = ou_variance_identity_check(
          ia->n, ia->alpha, ia->tau, t_max, uniform_grid(t_max, points), as_trials(ia->trials),
          ia->seed);
      maybe_write_json(ia->json, rep.to_json());
      std::printf("ou identity: lhs=%.6g rhs=%.6g z=%.3f (trials %lld, redraws %lld)\n",
                  rep.lhs.mean, rep.rhs.mean, rep.z_score, rep.trials, rep.degenerate_redraws);
      if (!(std::abs(rep.z_score) <= ia->z_max)) {
        throw CheckFailure("identity z=" + std::to_string(rep.z_score) + " exceeds " +
                           std::to_string(ia->z_max));
      }
      return 0;
    };
  });

  const auto add_ensemble = [&](CLI::App* cmd) {
    cmd->add_option("--profile", ia->profile, "variance profile: goe|wigner|checkerboard");
    cmd->add_option("--law", ia->law, "entry law: gaussian|uniform_scaled|shifted_bimodal_smoothed");
    cmd->add_option("--band", ia->band, "band partition width (default: entries partition)");
  };

  auto* ci_pdbr = ci->add_subcommand("pdbr", "block-resampling variance identity");
  add_common(ci_pdbr);
  add_ensemble(ci_pdbr);
  ci_pdbr->callback([&, ia] {
    action = [ia] {
      EnsembleSpec ens;
      ens.profile = ia->profile;
      ens.law = EntryLaw::parse(ia->law);
      const AdmissiblePartition p = make_partition(ia->n, ia->band);
      const IdentityReport rep = pdbr_variance_identity_check(
          p, ia->alpha, ens.make_profile(ia->n), ens.law, as_trials(ia->trials), ia->seed);
      maybe_write_json(ia->json, rep.to_json());
      std::printf("pdbr identity: lhs=%.6g rhs=%.6g z=%.3f (trials %lld)\n", rep.lhs.mean,
                  rep.rhs.mean, rep.z_score, rep.trials);
      if (!(std::abs(rep.z_score) <= ia->z_max)) {
        throw CheckFailure("identity z=" + std::to_string(rep.z_score) + " exceeds " +
                           std::to_string(ia->z_max));
      }
      return 0;
    };
  });

  auto* ci_ladder = ci->add_subcommand("ladder", "resampling level decomposition monotonicity");
  add_common(ci_ladder);
  add_ensemble(ci_ladder);
  ci_ladder->callback([&, ia] {
    action = [ia] {
      EnsembleSpec ens;
      ens.profile = ia->profile;
      ens.law = EntryLaw::parse(ia->law);
      const AdmissiblePartition p = make_partition(ia->n, ia->band);
      const TkLadderReport rep = t_k_ladder(p, ia->alpha, ens.make_profile(ia->n), ens.law,
                                            as_trials(ia->trials), ia->seed);
      maybe_write_json(ia->json, rep.to_json());
      std::printf("ladder: m=%zu var=%.6g ok=%s (trials %lld)\n", rep.t_k.size(),
                  rep.variance.mean, rep.all_ok ? "yes" : "no", rep.trials);
      if (!rep.all_ok) throw CheckFailure("ladder monotonicity/bounds violated");
      return 0;
    };
  });

  auto* ci_cov = ci->add_subcommand("diff-cov", "one-block difference covariance vs closed form");
  add_common(ci_cov, false);
  ci_cov->add_option("--tau", ia->tau, "per-ring rate");
  ci_cov->add_option("--kb", ia->kb, "ring count of the acted block");
  ci_cov->callback([&, ia] {
    action = [ia] {
      if (ia->kb < 0) throw ValidationError("--kb must be >= 0");
      if (ia->n < 2) throw ValidationError("--n must be >= 2");
      const AdmissiblePartition p = entries_partition(ia->n);
      RingCounts counts{&p, std::vector<int>(static_cast<std::size_t>(p.m()), 0)};
      const int block = p.block_of(0, 1);
      counts.per_block[static_cast<std::size_t>(block)] = ia->kb;
      const IdentityReport rep =
          pdbou_diff_cov_mc(p, ia->tau, counts, block, as_trials(ia->trials), ia->seed);
      maybe_write_json(ia->json, rep.to_json());
      std::printf("diff-cov K_B=%d: mc=%.6g closed=%.6g z=%.3f (trials %lld)\n", ia->kb,
                  rep.lhs.mean, rep.rhs.mean, rep.z_score, rep.trials);
      if (!(std::abs(rep.z_score) <= ia->z_max)) {
        throw CheckFailure("identity z=" + std::to_string(rep.z_score) + " exceeds " +
                           std::to_string(ia->z_max));
      }
      return 0;
    };
  });

  auto* ci_dom = ci->add_subcommand("dominance", "T_+/T_- dominance inside the time cap");
  add_common(ci_dom);
  ci_dom->add_option("--tau", ia->tau, "per-ring rate");
  ci_dom->add_option("--eta", ia->eta, "block clock rate");
  ci_dom->add_option("--t", ia->t, "horizon");
  ci_dom->callback([&, ia] {
    action = [ia] {
      const AdmissiblePartition p = entries_partition(ia->n);
      const TPlusMinusReport rep =
          t_plus_minus(p, ia->alpha, ia->eta, ia->tau, ia->t, as_trials(ia->trials), ia->seed);
      maybe_write_json(ia->json, rep.to_json());
      std::printf(
          "dominance: T+=%.6g T-=%.6g half-diff=%.6g (se %.3g) cap=%.4g in_range=%s ok=%s\n",
          rep.t_plus.mean, rep.t_minus.mean, rep.half_diff.mean, rep.half_diff.std_error,
          rep.t_cap, rep.t_in_range ? "yes" : "no", rep.dominance_ok ? "yes" : "no");
      if (!rep.t_in_range) throw ValidationError("t outside the dominance time cap");
      if (!rep.dominance_ok || !rep.positivity_ok) {
        throw CheckFailure("dominance/positivity violated");
      }
      return 0;
    };
  });

  auto* ci_mono = ci->add_subcommand("monotonicity", "overlap nonincreasing along the flow");
  add_common(ci_mono);
  ci_mono->add_option("--tau", ia->tau, "flow rate");
  ci_mono->add_option("--t-max", ia->t_max, "largest grid time");
  ci_mono->add_option("--grid-points", ia->grid_points, "grid point count");
  ci_mono->callback([&, ia] {
    action = [ia] {
      const double t_max = ia->t_max > 0.0 ? ia->t_max : 1.0;
      const int points = ia->grid_points > 0 ? ia->grid_points : 5;
      const OverlapCurveReport rep = ou_overlap_monotonicity(
          ia->n, ia->alpha, ia->tau, uniform_grid(t_max, points), as_trials(ia->trials), ia->seed);
      maybe_write_json(ia->json, rep.to_json());
      std::printf("monotonicity: %d points, overlap(0)=%.6g overlap(t_max)=%.6g ok=%s\n", points,
                  rep.overlap.front().mean, rep.overlap.back().mean, rep.all_ok ? "yes" : "no");
      if (!rep.all_ok) throw CheckFailure("overlap curve not monotone within tolerance");
      return 0;
    };
  });

  // --- parse + dispatch ---------------------------------------------------------
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (threads > 0) set_thread_budget(threads);
    return action();
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const CheckFailure& e) {
    std::fprintf(stderr, "check failed: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "runtime error: %s\n", e.what());
    return 2;
  }
}
