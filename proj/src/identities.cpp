#include "eigenchaos/identities.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <limits>
#include <nlohmann/json.hpp>
#include <string>
#include <utility>
#include <vector>

#include "eigenchaos/common.hpp"
#include "eigenchaos/rng.hpp"
#include "eigenchaos/spectral.hpp"
#include "eigenchaos/threads.hpp"

namespace eigenchaos {
namespace {

using nlohmann::json;

json est_json(const MCEstimate& e) {
  return json{{"mean", e.mean}, {"std_error", e.std_error}, {"trials", e.trials}};
}

// Trial k of stream row r draws from stream id r * 2^32 + k.
Rng trial_rng(std::uint64_t seed, std::uint64_t row, long long trial) {
  return Rng(seed, (row << 32) | static_cast<std::uint64_t>(trial));
}

constexpr long long kMaxTrials = (1ll << 32) - 1;

void validate_trials(long long trials) {
  if (trials < 2 || trials > kMaxTrials) throw ValidationError("trials must be in [2, 2^32)");
}

void validate_alpha(int alpha, int n) {
  if (alpha < 1 || alpha > n) {
    throw ValidationError("alpha must be in [1, n]; got alpha=" + std::to_string(alpha) +
                          ", n=" + std::to_string(n));
  }
}

// Retries the trial body on near-degenerate spectra with forked streams,
// counting each retry. A gap that stays at machine scale for this many fresh
// draws means the configuration is degenerate, not the draw.
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

// Exact for the small arguments used here (m <= 8).
double binom(int n, int k) {
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

double combined_z(const MCEstimate& lhs, const MCEstimate& rhs) {
  const double se = std::hypot(lhs.std_error, rhs.std_error);
  const double diff = std::abs(lhs.mean - rhs.mean);
  if (se == 0.0) return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return diff / se;
}

}  // namespace

std::string IdentityReport::to_json() const {
  json j;
  j["lhs"] = lhs.mean;
  j["rhs"] = rhs.mean;
  j["se_lhs"] = lhs.std_error;
  j["se_rhs"] = rhs.std_error;
  j["z"] = z_score;
  j["trials"] = trials;
  j["seed"] = seed;
  j["params"] = params.empty() ? json::object() : json::parse(params);
  return j.dump(2);
}

IdentityReport ou_variance_identity_check(int n, int alpha, double tau, double t_max,
                                          const std::vector<double>& time_grid, long long trials,
                                          std::uint64_t seed) {
  if (n < 1) throw ValidationError("n must be >= 1");
  validate_alpha(alpha, n);
  if (!(tau > 0.0)) throw ValidationError("tau must be positive");
  validate_trials(trials);
  const std::size_t q = time_grid.size();
  if (q < 3 || q % 2 == 0) throw ValidationError("time_grid needs an odd number of points >= 3");
  if (time_grid.front() != 0.0) throw ValidationError("time_grid must start at 0");
  for (std::size_t k = 1; k < q; ++k) {
    if (!(time_grid[k] > time_grid[k - 1])) {
      throw ValidationError("time_grid must be strictly increasing");
    }
  }
  if (time_grid.back() != t_max) throw ValidationError("time_grid must end at t_max");
  if (!(std::exp(-tau * t_max) <= 0.01)) {
    throw ValidationError("t_max too small: need e^{-tau t_max} <= 0.01");
  }

  const VarianceProfile profile = VarianceProfile::goe(n);

  // Left side: eigenvalue variance over independent draws.
  std::vector<double> lam(static_cast<std::size_t>(trials));
  parallel_trials(trials, [&](long long trial) {
    Rng rng = trial_rng(seed, 0, trial);
    lam[trial] = eigh_values(sample_goe(n, rng))[alpha - 1];
  });
  const MCEstimate lhs = variance_estimate(lam);

  // Right side: one stationary trajectory per trial; trapezoid quadrature of
  // 2 tau e^{-tau t} overlap_sq(t) on the full grid, and on the nested
  // half-resolution grid from the same trajectory for the quadrature
  // allowance.
  std::vector<double> weight(q);
  for (std::size_t k = 0; k < q; ++k) weight[k] = std::exp(-tau * time_grid[k]);
  std::vector<double> fine(static_cast<std::size_t>(trials));
  std::vector<double> coarse(static_cast<std::size_t>(trials));
  std::atomic<long long> redraws{0};
  parallel_trials(trials, [&](long long trial) {
    auto [f, c] = with_redraws(trial_rng(seed, 1, trial), redraws, [&](Rng& rng) {
      SymmetricMatrix x = sample_goe(n, rng);
      const Spectrum s0 = eigh(x);
      std::vector<double> g(q);
      g[0] = weight[0];  // the overlap of the start with itself is exactly 1
      for (std::size_t k = 1; k < q; ++k) {
        x = ou_advance(x, time_grid[k] - time_grid[k - 1], tau, profile, rng);
        g[k] = weight[k] * overlap_sq(s0, eigh(x), alpha);
      }
      double fi = 0.0;
      for (std::size_t k = 0; k + 1 < q; ++k) {
        fi += 0.5 * (time_grid[k + 1] - time_grid[k]) * (g[k] + g[k + 1]);
      }
      double co = 0.0;
      for (std::size_t k = 0; k + 2 < q; k += 2) {
        co += 0.5 * (time_grid[k + 2] - time_grid[k]) * (g[k] + g[k + 2]);
      }
      return std::pair<double, double>(2.0 * tau * fi, 2.0 * tau * co);
    });
    fine[trial] = f;
    coarse[trial] = c;
  });
  const MCEstimate rhs_mc = mc_estimate(fine);
  const MCEstimate refine = difference_estimate(fine, coarse);
  const double quad_allowance = std::abs(refine.mean) + refine.std_error;
  const double truncation_allowance = lhs.mean * std::exp(-tau * t_max);

  IdentityReport rep;
  rep.lhs = lhs;
  rep.rhs = rhs_mc;
  rep.rhs.std_error = rhs_mc.std_error + truncation_allowance + quad_allowance;
  rep.z_score = combined_z(rep.lhs, rep.rhs);
  rep.trials = trials;
  rep.seed = seed;
  rep.degenerate_redraws = redraws.load();
  const json params{{"check", "ou-variance-identity"},
                    {"n", n},
                    {"alpha", alpha},
                    {"tau", tau},
                    {"t_max", t_max},
                    {"grid_points", q},
                    {"quadrature_allowance", quad_allowance},
                    {"truncation_allowance", truncation_allowance},
                    {"degenerate_redraws", rep.degenerate_redraws}};
  rep.params = params.dump();
  return rep;
}

namespace {

// One shared-draw trial of the resampling decomposition: fills level[k],
// k = 0..m-1, with binom(m-1,k)^{-1} Sum_B Sum_{|A|=k, B not in A}
// Delta_B * Delta_B^A, where all 2^m spectra come from one (X, Y) pair.
void pdbr_trial_levels(const AdmissiblePartition& p, int alpha, const VarianceProfile& profile,
                       const EntryLaw& law, Rng& rng, std::vector<double>& lam, double* level) {
  const int m = p.m();
  const int full = 1 << m;
  const SymmetricMatrix x = sample_generalized_wigner(profile, law, rng);
  const SymmetricMatrix y = sample_generalized_wigner(profile, law, rng);
  for (int mask = 0; mask < full; ++mask) {
    SymmetricMatrix z = x;
    for (int b = 0; b < m; ++b) {
      if (mask & (1 << b)) {
        for (auto [i, j] : p.upper_reps(b)) z.set(i, j, y(i, j));
      }
    }
    lam[mask] = eigh_values(z)[alpha - 1];
  }
  for (int k = 0; k < m; ++k) level[k] = 0.0;
  for (int b = 0; b < m; ++b) {
    const double d_b = lam[0] - lam[1 << b];
    const int others = (full - 1) ^ (1 << b);
    int a = others;
    while (true) {
      level[std::popcount(static_cast<unsigned>(a))] += d_b * (lam[a] - lam[a | (1 << b)]);
      if (a == 0) break;
      a = (a - 1) & others;
    }
  }
  for (int k = 0; k < m; ++k) level[k] /= binom(m - 1, k);
}

void validate_pdbr_inputs(const AdmissiblePartition& p, int alpha, const VarianceProfile& profile,
                          long long trials) {
  if (!p.finalized()) throw ValidationError("partition must be finalized");
  validate_alpha(alpha, p.n);
  if (profile.n != p.n) throw ValidationError("profile size does not match partition");
  validate_trials(trials);
  if (p.m() > 8) {
    throw ValidationError("m too large for exact enumeration of (B, A) pairs: m=" +
                          std::to_string(p.m()) + " > 8");
  }
}

}  // namespace

IdentityReport pdbr_variance_identity_check(const AdmissiblePartition& p, int alpha,
                                            const VarianceProfile& profile, const EntryLaw& law,
                                            long long trials, std::uint64_t seed) {
  validate_pdbr_inputs(p, alpha, profile, trials);
  const int m = p.m();

  std::vector<double> lam_ind(static_cast<std::size_t>(trials));
  parallel_trials(trials, [&](long long trial) {
    Rng rng = trial_rng(seed, 0, trial);
    lam_ind[trial] = eigh_values(sample_generalized_wigner(profile, law, rng))[alpha - 1];
  });
  const MCEstimate lhs = variance_estimate(lam_ind);

  std::vector<double> rsum(static_cast<std::size_t>(trials));
  parallel_trials(trials, [&](long long trial) {
    Rng rng = trial_rng(seed, 1, trial);
    std::vector<double> lam(static_cast<std::size_t>(1) << m);
    std::vector<double> level(static_cast<std::size_t>(m));
    pdbr_trial_levels(p, alpha, profile, law, rng, lam, level.data());
    double r = 0.0;
    for (int k = 0; k < m; ++k) r += level[k];
    rsum[trial] = r / (2.0 * m);
  });
  const MCEstimate rhs = mc_estimate(rsum);

  IdentityReport rep;
  rep.lhs = lhs;
  rep.rhs = rhs;
  rep.z_score = combined_z(lhs, rhs);
  rep.trials = trials;
  rep.seed = seed;
  const json params{{"check", "pdbr-variance-identity"},
                    {"n", p.n},
                    {"m", m},
                    {"alpha", alpha},
                    {"law", law.name()}};
  rep.params = params.dump();
  return rep;
}

IdentityReport pdbr_variance_identity_check(const AdmissiblePartition& p, int alpha,
                                            long long trials, std::uint64_t seed) {
  return pdbr_variance_identity_check(p, alpha, VarianceProfile::wigner(p.n), EntryLaw{}, trials,
                                      seed);
}

TkLadderReport t_k_ladder(const AdmissiblePartition& p, int alpha, const VarianceProfile& profile,
                          const EntryLaw& law, long long trials, std::uint64_t seed) {
  validate_pdbr_inputs(p, alpha, profile, trials);
  const int m = p.m();

  std::vector<double> lam_ind(static_cast<std::size_t>(trials));
  parallel_trials(trials, [&](long long trial) {
    Rng rng = trial_rng(seed, 0, trial);
    lam_ind[trial] = eigh_values(sample_generalized_wigner(profile, law, rng))[alpha - 1];
  });
  const MCEstimate var = variance_estimate(lam_ind);

  std::vector<std::vector<double>> col(m, std::vector<double>(static_cast<std::size_t>(trials)));
  parallel_trials(trials, [&](long long trial) {
    Rng rng = trial_rng(seed, 1, trial);
    std::vector<double> lam(static_cast<std::size_t>(1) << m);
    std::vector<double> level(static_cast<std::size_t>(m));
    pdbr_trial_levels(p, alpha, profile, law, rng, lam, level.data());
    for (int k = 0; k < m; ++k) col[k][trial] = level[k];
  });

  TkLadderReport rep;
  rep.variance = var;
  rep.trials = trials;
  rep.seed = seed;
  for (int k = 0; k < m; ++k) rep.t_k.push_back(mc_estimate(col[k]));
  bool all = true;
  for (int k = 0; k + 1 < m; ++k) {
    const MCEstimate d = difference_estimate(col[k], col[k + 1]);
    const bool viol = d.std_error > 0.0 ? d.mean < -2.0 * d.std_error : d.mean < 0.0;
    rep.step.push_back(d);
    rep.step_violation.push_back(viol);
    if (viol) all = false;
  }
  const MCEstimate& last = rep.t_k.back();
  rep.nonneg_ok = last.mean >= -2.0 * last.std_error;
  if (!rep.nonneg_ok) all = false;
  for (int k = 0; k < m; ++k) {
    const double lim = 2.0 * m / (k + 1.0);
    const double allowance = 3.0 * std::hypot(rep.t_k[k].std_error, lim * var.std_error);
    const bool viol = rep.t_k[k].mean > lim * var.mean + allowance;
    rep.bound_violation.push_back(viol);
    if (viol) all = false;
  }
  rep.all_ok = all;
  return rep;
}

TkLadderReport t_k_ladder(const AdmissiblePartition& p, int alpha, long long trials,
                          std::uint64_t seed) {
  return t_k_ladder(p, alpha, VarianceProfile::wigner(p.n), EntryLaw{}, trials, seed);
}

std::string TkLadderReport::to_json() const {
  json j;
  j["t_k"] = json::array();
  for (const auto& e : t_k) j["t_k"].push_back(est_json(e));
  j["variance"] = est_json(variance);
  j["step"] = json::array();
  for (const auto& e : step) j["step"].push_back(est_json(e));
  j["step_violation"] = step_violation;
  j["nonneg_ok"] = nonneg_ok;
  j["bound_violation"] = bound_violation;
  j["all_ok"] = all_ok;
  j["trials"] = trials;
  j["seed"] = seed;
  return j.dump(2);
}

double pdbou_diff_cov(double tau, int k_b, double sigma2) {
  if (!(tau > 0.0)) throw ValidationError("tau must be positive");
  if (k_b < 0) throw ValidationError("ring count must be >= 0");
  if (!(sigma2 >= 0.0)) throw ValidationError("sigma2 must be >= 0");
  const double u = -std::expm1(-tau);  // 1 - e^{-tau}
  if (k_b == 0) return 2.0 * u * sigma2;
  return -u * u * std::exp(-tau * (k_b - 1)) * sigma2;
}

IdentityReport pdbou_diff_cov_mc(const AdmissiblePartition& p, double tau, const RingCounts& K,
                                 int block_id, long long trials, std::uint64_t seed,
                                 std::optional<std::pair<int, int>> entry,
                                 std::optional<VarianceProfile> profile) {
  if (!p.finalized()) throw ValidationError("partition must be finalized");
  if (!(tau > 0.0)) throw ValidationError("tau must be positive");
  validate_trials(trials);
  if (K.partition != &p) throw ValidationError("ring counts were built for a different partition");
  if (static_cast<int>(K.per_block.size()) != p.m()) {
    throw ValidationError("ring counts do not cover every block");
  }
  for (int k : K.per_block) {
    if (k < 0) throw ValidationError("ring counts must be >= 0");
  }
  if (block_id < 0 || block_id >= p.m()) throw ValidationError("block id out of range");
  const VarianceProfile prof = profile ? *profile : VarianceProfile::goe(p.n);
  if (prof.n != p.n) throw ValidationError("profile size does not match partition");

  const auto& reps = p.upper_reps(block_id);
  int i0 = 0;
  int j0 = 0;
  if (entry) {
    i0 = entry->first - 1;
    j0 = entry->second - 1;
    if (i0 < 0 || i0 >= p.n || j0 < 0 || j0 >= p.n || p.block_of(i0, j0) != block_id) {
      throw ValidationError("entry (" + std::to_string(entry->first) + "," +
                            std::to_string(entry->second) + ") is not in block " +
                            std::to_string(block_id + 1));
    }
  } else {
    i0 = reps.front().first;
    j0 = reps.front().second;
  }
  const int kb = K.per_block[block_id];
  const double sigma2 = prof.at(i0, j0);
  const double closed = pdbou_diff_cov(tau, kb, sigma2);
  const EntryLaw law{};

  // Both differences are supported on the acted block and the flow acts
  // entrywise, so only that block is simulated. The four matrices sit on one
  // trajectory at ring times {0, 1, K_B, K_B + 1}: the head segment is the
  // shared ring, so for K_B = 0 the two differences coincide.
  std::vector<double> prod(static_cast<std::size_t>(trials));
  parallel_trials(trials, [&](long long trial) {
    Rng rng = trial_rng(seed, 0, trial);
    const SymmetricMatrix x0 = sample_generalized_wigner(prof, law, rng);
    const SymmetricMatrix x1 = ou_advance_on(x0, reps, 1.0, tau, prof, rng);
    const double d0 = x0(i0, j0) - x1(i0, j0);
    double dk = d0;
    if (kb > 0) {
      const SymmetricMatrix xk = ou_advance_on(x1, reps, static_cast<double>(kb - 1), tau, prof, rng);
      const SymmetricMatrix xk1 = ou_advance_on(xk, reps, 1.0, tau, prof, rng);
      dk = xk(i0, j0) - xk1(i0, j0);
    }
    prod[trial] = d0 * dk;
  });

  IdentityReport rep;
  rep.lhs = mc_estimate(prod);
  rep.rhs = MCEstimate{closed, 0.0, trials};
  rep.z_score = combined_z(rep.lhs, rep.rhs);
  rep.trials = trials;
  rep.seed = seed;
  const json params{{"check", "pdbou-diff-cov"},
                    {"tau", tau},
                    {"block", block_id + 1},
                    {"k_b", kb},
                    {"i", i0 + 1},
                    {"j", j0 + 1},
                    {"sigma2", sigma2},
                    {"ring_counts", K.per_block}};
  rep.params = params.dump();
  return rep;
}

double pdbou_dominance_time_cap(double tau, double eta) {
  if (!(tau > 0.0)) throw ValidationError("tau must be positive");
  if (!(eta > 0.0)) throw ValidationError("eta must be positive");
  return std::exp(tau) / eta * (-std::log1p(-std::exp(-tau)));
}

TPlusMinusReport t_plus_minus(const AdmissiblePartition& p, int alpha, double eta, double tau,
                              double t, long long trials, std::uint64_t seed) {
  if (!p.finalized()) throw ValidationError("partition must be finalized");
  const int n = p.n;
  validate_alpha(alpha, n);
  if (!(eta > 0.0)) throw ValidationError("eta must be positive");
  if (!(tau > 0.0)) throw ValidationError("tau must be positive");
  if (!(t >= 0.0)) throw ValidationError("t must be >= 0");
  validate_trials(trials);

  const VarianceProfile profile = VarianceProfile::goe(n);
  const int m = p.m();
  const double u = -std::expm1(-tau);  // 1 - e^{-tau}
  const int mi = 0;
  const int mj = n >= 2 ? 1 : 0;
  const int mon_block = p.block_of(mi, mj);

  std::vector<double> plus(static_cast<std::size_t>(trials));
  std::vector<double> minus(static_cast<std::size_t>(trials));
  std::vector<double> dom(static_cast<std::size_t>(trials));
  std::vector<double> mon(static_cast<std::size_t>(trials));
  std::vector<signed char> bucket(static_cast<std::size_t>(trials));
  std::atomic<long long> redraws{0};
  parallel_trials(trials, [&](long long trial) {
    with_redraws(trial_rng(seed, 0, trial), redraws, [&](Rng& rng) {
      const SymmetricMatrix g = sample_goe(n, rng);
      const SymmetricMatrix grad_g = eig_grad(eigh(g), alpha);
      const RingCounts counts = pdbou_ring_counts(p, eta, t, rng);
      const PdbouPair pair = pdbou_sample_pair(g, counts, tau, profile, rng);
      const SymmetricMatrix grad_k = eig_grad(eigh(pair.g_k), alpha);
      double tp = 0.0;
      double tm = 0.0;
      for (int b = 0; b < m; ++b) {
        double s_b = 0.0;
        for (auto [i, j] : p.upper_reps(b)) {
          s_b += (i == j ? 1.0 : 2.0) * grad_g(i, j) * grad_k(i, j);
        }
        const int kb = counts.per_block[b];
        if (kb == 0) {
          tp += 4.0 * u * s_b;
        } else {
          tm += 2.0 * u * u * std::exp(-tau * (kb - 1)) * s_b;
        }
      }
      plus[trial] = tp;
      minus[trial] = tm;
      dom[trial] = 0.5 * tp - tm;
      mon[trial] = grad_g(mi, mj) * grad_k(mi, mj);
      bucket[trial] = static_cast<signed char>(std::min(counts.per_block[mon_block], 4));
      return 0;
    });
  });

  TPlusMinusReport rep;
  rep.t_plus = mc_estimate(plus);
  rep.t_minus = mc_estimate(minus);
  rep.half_diff = mc_estimate(dom);
  rep.t_cap = pdbou_dominance_time_cap(tau, eta);
  rep.t_in_range = t <= rep.t_cap + 1e-12;
  rep.dominance_ok = rep.half_diff.mean >= -2.0 * rep.half_diff.std_error;
  rep.monitored_block = mon_block;
  rep.monitored_entry = {mi + 1, mj + 1};
  rep.positivity_ok = true;
  for (int v = 0; v <= 4; ++v) {
    std::vector<double> vals;
    for (long long k = 0; k < trials; ++k) {
      if (bucket[k] == v) vals.push_back(mon[k]);
    }
    rep.k_bucket_counts.push_back(static_cast<long long>(vals.size()));
    if (vals.size() >= 2) {
      const MCEstimate e = mc_estimate(vals);
      rep.k_bucket_alignment.push_back(e);
      if (e.mean < -2.0 * e.std_error) rep.positivity_ok = false;
    } else {
      rep.k_bucket_alignment.push_back(MCEstimate{0.0, 0.0, static_cast<long long>(vals.size())});
    }
  }
  rep.degenerate_redraws = redraws.load();
  rep.trials = trials;
  rep.seed = seed;
  return rep;
}

std::string TPlusMinusReport::to_json() const {
  json j;
  j["t_plus"] = est_json(t_plus);
  j["t_minus"] = est_json(t_minus);
  j["half_diff"] = est_json(half_diff);
  j["t_cap"] = t_cap;
  j["t_in_range"] = t_in_range;
  j["dominance_ok"] = dominance_ok;
  j["k_bucket_alignment"] = json::array();
  for (const auto& e : k_bucket_alignment) j["k_bucket_alignment"].push_back(est_json(e));
  j["k_bucket_counts"] = k_bucket_counts;
  j["positivity_ok"] = positivity_ok;
  j["monitored_block"] = monitored_block + 1;
  j["monitored_entry"] = json::array({monitored_entry.first, monitored_entry.second});
  j["degenerate_redraws"] = degenerate_redraws;
  j["trials"] = trials;
  j["seed"] = seed;
  return j.dump(2);
}

OverlapCurveReport ou_overlap_monotonicity(int n, int alpha, double tau,
                                           const std::vector<double>& time_grid, long long trials,
                                           std::uint64_t seed) {
  if (n < 1) throw ValidationError("n must be >= 1");
  validate_alpha(alpha, n);
  if (!(tau > 0.0)) throw ValidationError("tau must be positive");
  validate_trials(trials);
  const std::size_t q = time_grid.size();
  if (q < 2) throw ValidationError("time_grid needs at least 2 points");
  if (!(time_grid.front() >= 0.0)) throw ValidationError("times must be >= 0");
  for (std::size_t k = 1; k < q; ++k) {
    if (!(time_grid[k] > time_grid[k - 1])) {
      throw ValidationError("time_grid must be strictly increasing");
    }
  }

  const VarianceProfile profile = VarianceProfile::goe(n);
  std::vector<std::vector<double>> col(q, std::vector<double>(static_cast<std::size_t>(trials)));
  std::atomic<long long> redraws{0};
  parallel_trials(trials, [&](long long trial) {
    with_redraws(trial_rng(seed, 0, trial), redraws, [&](Rng& rng) {
      SymmetricMatrix x = sample_goe(n, rng);
      const Spectrum s0 = eigh(x);
      double prev = 0.0;
      for (std::size_t k = 0; k < q; ++k) {
        if (time_grid[k] == 0.0) {
          col[k][trial] = 1.0;  // the overlap with itself, exactly
          continue;
        }
        x = ou_advance(x, time_grid[k] - prev, tau, profile, rng);
        prev = time_grid[k];
        col[k][trial] = overlap_sq(s0, eigh(x), alpha);
      }
      return 0;
    });
  });

  OverlapCurveReport rep;
  rep.times = time_grid;
  for (const auto& c : col) rep.overlap.push_back(mc_estimate(c));
  bool all = true;
  for (std::size_t k = 0; k + 1 < q; ++k) {
    const MCEstimate d = difference_estimate(col[k + 1], col[k]);
    const bool viol = d.std_error > 0.0 ? d.mean > 2.0 * d.std_error : d.mean > 0.0;
    rep.step.push_back(d);
    rep.step_violation.push_back(viol);
    if (viol) all = false;
  }
  rep.all_ok = all;
  rep.degenerate_redraws = redraws.load();
  rep.trials = trials;
  rep.seed = seed;
  return rep;
}

std::string OverlapCurveReport::to_json() const {
  json j;
  j["times"] = times;
  j["overlap"] = json::array();
  for (const auto& e : overlap) j["overlap"].push_back(est_json(e));
  j["step"] = json::array();
  for (const auto& e : step) j["step"].push_back(est_json(e));
  j["step_violation"] = step_violation;
  j["all_ok"] = all_ok;
  j["degenerate_redraws"] = degenerate_redraws;
  j["trials"] = trials;
  j["seed"] = seed;
  return j.dump(2);
}

}  // namespace eigenchaos
