// Acceptance suite: checks the library end to end against its pinned
// numerical targets, one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Heavier simulation batches are shared across criteria
// and parallelized at the run level.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "mabcs/bounds.hpp"
#include "mabcs/cof.hpp"
#include "mabcs/instance.hpp"
#include "mabcs/metrics.hpp"
#include "mabcs/rng.hpp"
#include "mabcs/runner.hpp"
#include "mabcs/sampler.hpp"

using namespace mabcs;
namespace fs = std::filesystem;

namespace {

constexpr unsigned kWorkers = 4;
constexpr std::uint64_t kMasterSeed = 20250810;

struct Criterion {
  int id;
  std::string name;
  bool pass;
  std::string detail;
};

std::vector<Criterion> g_results;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  g_results.push_back({id, name, pass, detail});
  std::printf("%s  %d  %-28s %s\n", pass ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
}

BanditInstance nu1() {
  BanditInstance inst;
  inst.means = {0.15, 0.24, 0.96, 0.95, 0.99, 0.98, 0.97};
  inst.costs = {1, 2, 3, 4, 5, 6, 7};
  inst.alpha = 0.8;
  return inst;
}

BanditInstance nu2() {
  BanditInstance inst;
  inst.means = {0.44, 0.46, 0.48, 0.7, 0.71, 0.704, 0.714, 0.702, 0.716, 0.708, 0.712, 0.706};
  inst.costs = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
  inst.alpha = 0.3;
  return inst;
}

std::vector<RunRequest> make_requests(Algorithm alg, double alpha, std::uint32_t runs,
                                      std::uint64_t horizon, double delta) {
  std::vector<RunRequest> rq;
  for (std::uint32_t r = 0; r < runs; ++r) {
    rq.push_back({alg, alpha, r, horizon, delta,
                  derive_seed(kMasterSeed, algorithm_name(alg), alpha, r)});
  }
  return rq;
}

double mean_of(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double summed_terminal_regret(const RunTrace& t) {
  return t.checkpoints.back().cost_regret + t.checkpoints.back().quality_regret;
}

// Percentile bootstrap CI for mean(a) - mean(b), two independent samples.
std::pair<double, double> bootstrap_mean_diff_ci(const std::vector<double>& a,
                                                 const std::vector<double>& b, int resamples,
                                                 std::uint64_t seed) {
  CounterRng rng(seed);
  std::vector<double> diffs;
  diffs.reserve(resamples);
  for (int i = 0; i < resamples; ++i) {
    double ma = 0.0, mb = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
      ma += a[static_cast<std::size_t>(rng.next_u64() % a.size())];
    }
    for (std::size_t j = 0; j < b.size(); ++j) {
      mb += b[static_cast<std::size_t>(rng.next_u64() % b.size())];
    }
    diffs.push_back(ma / static_cast<double>(a.size()) - mb / static_cast<double>(b.size()));
  }
  std::sort(diffs.begin(), diffs.end());
  return {percentile_sorted(diffs, 0.025), percentile_sorted(diffs, 0.975)};
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// ---------------------------------------------------------------------------

void criterion_1_instance_fidelity() {
  const auto a1 = analyze(nu1());
  const auto a2 = analyze(nu2());
  const bool pass = std::abs(a1.mu_cs - 0.198) <= 1e-12 && a1.a_star + 1 == 2 &&
                    std::abs(a2.mu_cs - 0.5012) <= 1e-12 && a2.a_star + 1 == 4;
  report(1, "instance-fidelity", pass,
         "nu1: mu_cs=" + fmt(a1.mu_cs) + " a*=" + std::to_string(a1.a_star + 1) +
             "; nu2: mu_cs=" + fmt(a2.mu_cs) + " a*=" + std::to_string(a2.a_star + 1));
}

void criterion_2_episode_trajectory(const std::vector<RunTrace>& cof_runs,
                                    std::uint64_t horizon) {
  int exact_log = 0;
  int exact_log_and_commit = 0;
  for (const auto& t : cof_runs) {
    const bool log_ok = t.events.size() == 4 && t.events[0].arm == 0 &&
                        t.events[0].kind == EventKind::deemed_infeasible &&
                        t.events[1].arm == 1 &&
                        t.events[1].kind == EventKind::deemed_infeasible &&
                        t.events[2].arm == 2 &&
                        t.events[2].kind == EventKind::deemed_infeasible &&
                        t.events[3].arm == 3 && t.events[3].kind == EventKind::deemed_feasible;
    if (!log_ok) continue;
    ++exact_log;
    // samples of arm 4 inside (T/2, T]
    const auto& half = t.count_snapshots.front().second;  // at T/2
    const std::uint64_t arm4_second_half = t.final_counts[3] - half[3];
    if (static_cast<double>(arm4_second_half) >=
        0.99 * static_cast<double>(horizon - horizon / 2)) {
      ++exact_log_and_commit;
    }
  }
  const int n = static_cast<int>(cof_runs.size());
  const bool pass = exact_log_and_commit >= (95 * n + 99) / 100;
  report(2, "cof-episode-trajectory", pass,
         "exact event log " + std::to_string(exact_log) + "/" + std::to_string(n) +
             "; log AND >=99% arm-4 in final half " + std::to_string(exact_log_and_commit) + "/" +
             std::to_string(n) + " (need >=95%)");
}

void criterion_3_combining_ablation(const std::vector<RunTrace>& cof_runs,
                                    const std::vector<RunTrace>& nocomb_runs) {
  std::vector<double> a, b;
  std::uint64_t violations = 0;
  for (const auto& t : cof_runs) {
    a.push_back(summed_terminal_regret(t));
    violations += t.dominance_violations;
  }
  for (const auto& t : nocomb_runs) {
    b.push_back(summed_terminal_regret(t));
    violations += t.dominance_violations;
  }
  const auto [lo, hi] = bootstrap_mean_diff_ci(a, b, 2000, 424242);
  const bool pass = mean_of(a) < mean_of(b) && hi < 0.0 && violations == 0;
  report(3, "ablation-combining", pass,
         "mean summed regret cof=" + fmt(mean_of(a)) + " no_combine=" + fmt(mean_of(b)) +
             ", diff CI [" + fmt(lo) + ", " + fmt(hi) + "], dominance violations " +
             std::to_string(violations));
}

void criterion_4_exclusive_ablation() {
  const auto inst = nu1();
  const std::uint64_t horizon = 200000;
  const double delta = default_delta(inst.num_arms(), horizon);
  const auto grid = log_checkpoint_grid(horizon, 50);

  const auto runs_cof =
      run_many(inst, make_requests(Algorithm::cof, 0.8, 200, horizon, delta), grid, {}, kWorkers);
  const auto runs_noex =
      run_many(inst, make_requests(Algorithm::cof_no_exclusive, 0.8, 200, horizon, delta), grid,
               {}, kWorkers);

  std::vector<double> a, b, ta, tb;
  for (const auto& t : runs_cof) {
    a.push_back(summed_terminal_regret(t));
    for (const auto& ev : t.events) {
      if (ev.kind == EventKind::deemed_feasible && ev.arm == 1) {
        ta.push_back(static_cast<double>(ev.t));
      }
    }
  }
  for (const auto& t : runs_noex) {
    b.push_back(summed_terminal_regret(t));
    for (const auto& ev : t.events) {
      if (ev.kind == EventKind::deemed_feasible && ev.arm == 1) {
        tb.push_back(static_cast<double>(ev.t));
      }
    }
  }
  const auto [lo, hi] = bootstrap_mean_diff_ci(a, b, 2000, 434343);
  const bool pass = !ta.empty() && !tb.empty() && mean_of(a) < mean_of(b) && hi < 0.0 &&
                    mean_of(ta) < mean_of(tb);
  report(4, "ablation-exclusive", pass,
         "mean summed regret cof=" + fmt(mean_of(a)) + " no_exclusive=" + fmt(mean_of(b)) +
             ", diff CI [" + fmt(lo) + ", " + fmt(hi) + "], mean feasible(2) t " +
             fmt(ta.empty() ? 0.0 : mean_of(ta)) + " vs " + fmt(tb.empty() ? 0.0 : mean_of(tb)));
}

void criterion_5_cheap_arm_sample_law(const std::vector<RunTrace>& runs_1e6) {
  const auto analysis = analyze(nu2());
  std::map<std::uint64_t, std::vector<double>> mean_counts;  // horizon -> per-arm mean n_k

  auto mean_counts_of = [&](const std::vector<RunTrace>& runs) {
    std::vector<double> m(3, 0.0);
    for (const auto& t : runs) {
      for (std::size_t k = 0; k < 3; ++k) m[k] += static_cast<double>(t.final_counts[k]);
    }
    for (auto& v : m) v /= static_cast<double>(runs.size());
    return m;
  };

  for (std::uint64_t h : {std::uint64_t{10000}, std::uint64_t{100000}}) {
    const double delta = default_delta(12, h);
    const auto grid = log_checkpoint_grid(h, 20);
    const auto runs =
        run_many(nu2(), make_requests(Algorithm::cof, 0.3, 100, h, delta), grid, {}, kWorkers);
    mean_counts[h] = mean_counts_of(runs);
  }
  mean_counts[1000000] = mean_counts_of(runs_1e6);

  const double log_t = std::log(1e6);
  bool pass = true;
  std::string detail;
  for (std::size_t k = 0; k < 3; ++k) {
    const double gap = analysis.quality_gaps[k];
    const double bound = 2.0 * (16.0 * log_t / (gap * gap) + 2.0);
    const double n6 = mean_counts[1000000][k];
    const double n5 = mean_counts[100000][k];
    const double n4 = mean_counts[10000][k];
    const bool b_ok = n6 <= bound;
    const bool g_ok = (n6 - n5) <= 1.5 * (n5 - n4);
    pass = pass && b_ok && g_ok;
    detail += "arm" + std::to_string(k + 1) + ": n=" + fmt(n6) + (b_ok ? "<=" : ">!") +
              fmt(bound) + ", growth " + fmt(n6 - n5) + (g_ok ? "<=" : ">!") + "1.5*" +
              fmt(n5 - n4) + "; ";
  }
  report(5, "cheap-arm-sample-law", pass, detail);
}

void criterion_6_bounds_oracle() {
  CounterRng rng(substream_seed(kMasterSeed, 6));
  const std::array<double, 6> alphas{0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
  int instances = 0;
  int reductions_checked = 0;
  bool pass = true;
  std::string first_failure;

  auto check_instance = [&](const InstanceAnalysis& analysis) {
    for (double delta : {1e-4, 1e-8}) {
      std::uint64_t tau_dagger_exact = 0;
      std::uint64_t max_exact = 0;
      for (std::size_t ell : analysis.cheap_arms) {
        const auto tr = tau_search(analysis, ell, delta);
        const auto brute = exact_tau(analysis, ell, delta);
        if (static_cast<double>(brute) > tr.rounds) {
          pass = false;
          if (first_failure.empty()) {
            first_failure = "exact_tau " + std::to_string(brute) + " > tau_search " +
                            fmt(tr.rounds) + " (ell=" + std::to_string(ell + 1) + ")";
          }
        }
        if (ell == *analysis.a_dagger) tau_dagger_exact = brute;
        max_exact = std::max(max_exact, brute);
      }
      if (tau_dagger_exact != max_exact) {
        pass = false;
        if (first_failure.empty()) {
          first_failure = "tau_dagger " + std::to_string(tau_dagger_exact) + " != max " +
                          std::to_string(max_exact);
        }
      }
    }
    if (analysis.dagger_capable.size() == 1) {
      ++reductions_checked;
      const auto jb = lb_joint(analysis);
      const double per_sample = jb->rhs / jb->weights.front().second;
      const double gap_q = analysis.quality_gaps[*analysis.a_dagger];
      const double remark =
          2.0 * (1.0 - analysis.alpha) * (1.0 - analysis.alpha) / (gap_q * gap_q);
      if (std::abs(per_sample - remark) > 1e-12 * std::max(per_sample, remark)) {
        pass = false;
        if (first_failure.empty()) first_failure = "joint reduction mismatch";
      }
    }
  };

  while (instances < 100) {
    const std::size_t k = 4 + static_cast<std::size_t>(rng.next_u64() % 13);
    std::vector<double> means, costs;
    double c = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      means.push_back(rng.next_uniform());
      c += 0.01 + rng.next_uniform();
      costs.push_back(c);
    }
    BanditInstance inst;
    inst.means = means;
    inst.costs = costs;
    inst.alpha = alphas[static_cast<std::size_t>(rng.next_u64() % alphas.size())];
    const auto analysis = analyze(inst);
    if (analysis.cheap_arms.empty()) continue;
    ++instances;
    check_instance(analysis);
  }

  // constructed instances guaranteeing single-member dagger sets
  for (double shift : {0.0, 0.01, 0.02, 0.03, 0.04}) {
    BanditInstance inst;
    inst.means = {0.4, 0.42 + shift, 0.69, 0.9};
    inst.costs = {1, 2, 3, 4};
    inst.alpha = 0.4;
    const auto analysis = analyze(inst);
    if (analysis.dagger_capable.size() == 1) check_instance(analysis);
  }

  report(6, "bounds-oracle-equivalence", pass,
         pass ? "100 random instances ok, " + std::to_string(reductions_checked) +
                    " single-member dagger reductions checked"
              : first_failure);
}

void criterion_7_decomposition(const std::vector<RunTrace>& big_batch) {
  std::uint64_t mismatches = 0;
  std::size_t traces = 0;
  for (const auto& t : big_batch) {
    mismatches += t.decomposition_mismatches;
    ++traces;
  }
  // every policy on a fresh instance
  BanditInstance inst;
  inst.means = {0.35, 0.55, 0.55, 0.75, 0.9};
  inst.costs = {1, 2, 3, 4, 5};
  inst.alpha = 0.35;
  const auto grid = log_checkpoint_grid(20000, 40);
  for (Algorithm alg : {Algorithm::cof, Algorithm::cof_no_exclusive, Algorithm::cof_no_combine,
                        Algorithm::etc_cs, Algorithm::ucb_cs, Algorithm::ts_cs,
                        Algorithm::pe_cs_style}) {
    const auto runs = run_many(inst, make_requests(alg, 0.35, 3, 20000, default_delta(5, 20000)),
                               grid, {}, kWorkers);
    for (const auto& t : runs) {
      mismatches += t.decomposition_mismatches;
      ++traces;
    }
  }
  report(7, "regret-decomposition", mismatches == 0,
         std::to_string(traces) + " traces, " + std::to_string(mismatches) +
             " checkpoint mismatches");
}

void criterion_8_baseline_fragility() {
  // Cheap arm 0.02 below mu_cs = 0.675; its UCB index keeps re-entering the
  // empirically feasible set of UCB-CS long after COF has committed.
  BanditInstance inst;
  inst.means = {0.655, 0.725, 0.8, 0.9};
  inst.costs = {1, 2, 3, 4};
  inst.alpha = 0.25;
  const auto analysis = analyze(inst);
  const std::uint64_t horizon = 1000000;
  const double delta = default_delta(inst.num_arms(), horizon);
  const std::uint32_t runs = 50;
  const std::vector<std::uint64_t> snaps{horizon / 2, horizon};

  auto quality_pairs = [&](Algorithm alg) {
    const auto traces =
        run_many(inst, make_requests(alg, 0.25, runs, horizon, delta), {}, snaps, kWorkers);
    std::vector<std::pair<double, double>> out;
    for (const auto& t : traces) {
      const auto [c1, q_half] = regret_from_counts(t.count_snapshots[0].second, analysis);
      const auto [c2, q_full] = regret_from_counts(t.count_snapshots[1].second, analysis);
      (void)c1;
      (void)c2;
      out.emplace_back(q_half, q_full);
    }
    return out;
  };

  int ucb_ratio5 = 0;
  for (const auto& [qh, qf] : quality_pairs(Algorithm::ucb_cs)) {
    if (qf > 5.0 * qh) ++ucb_ratio5;
  }
  std::vector<double> cof_half, cof_full;
  for (const auto& [qh, qf] : quality_pairs(Algorithm::cof)) {
    cof_half.push_back(qh);
    cof_full.push_back(qf);
  }
  const double cof_increase = mean_of(cof_full) / std::max(mean_of(cof_half), 1e-12) - 1.0;
  const bool ucb_ok = 2 * ucb_ratio5 >= static_cast<int>(runs);
  const bool cof_ok = cof_increase < 0.10;
  report(8, "baseline-fragility", ucb_ok && cof_ok,
         "ucb_cs quality ratio>5 in " + std::to_string(ucb_ratio5) + "/" + std::to_string(runs) +
             " runs (need >=50%), cof second-half increase " + fmt(100.0 * cof_increase) + "%");
}

void criterion_9_reproducibility_throughput() {
  // (a) byte-identical sweep outputs across worker counts
  const fs::path dir = fs::temp_directory_path() / "mabcs_acceptance_c9";
  fs::remove_all(dir);
  fs::create_directories(dir);
  {
    std::ofstream out(dir / "nu2.txt");
    out << format_instance(nu2());
  }
  ExperimentConfig cfg;
  cfg.instance_path = (dir / "nu2.txt").string();
  cfg.algorithms = {Algorithm::cof, Algorithm::ts_cs};
  cfg.alphas = {0.3};
  cfg.horizon = 20000;
  cfg.num_runs = 4;
  cfg.master_seed = kMasterSeed;
  cfg.checkpoint_count = 30;
  cfg.output_dir = (dir / "w1").string();
  run_sweep(cfg, 1);
  cfg.output_dir = (dir / "w4").string();
  run_sweep(cfg, 4);

  bool identical = true;
  std::size_t files = 0;
  for (const auto& entry : fs::recursive_directory_iterator(dir / "w1")) {
    if (!entry.is_regular_file()) continue;
    ++files;
    const auto rel = fs::relative(entry.path(), dir / "w1");
    std::ifstream a(entry.path(), std::ios::binary);
    std::ifstream b(dir / "w4" / rel, std::ios::binary);
    std::ostringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    if (!b || sa.str() != sb.str() || sa.str().empty()) identical = false;
  }
  identical = identical && files > 0;

  // (b) one COF run at K=20, T=5e6 under 10 seconds
  BanditInstance big;
  const std::array<double, 20> means{0.30, 0.34, 0.38, 0.42, 0.46, 0.50, 0.54, 0.58, 0.62, 0.66,
                                     0.70, 0.74, 0.78, 0.80, 0.82, 0.84, 0.86, 0.88, 0.90, 0.92};
  for (int i = 0; i < 20; ++i) {
    big.means.push_back(means[static_cast<std::size_t>(i)]);
    big.costs.push_back(i + 1.0);
  }
  big.alpha = 0.3;
  validate(big);
  const std::uint64_t horizon = 5000000;
  RunRequest rq{Algorithm::cof, 0.3, 0, horizon, default_delta(20, horizon),
                derive_seed(kMasterSeed, "cof", 0.3, 0)};
  const auto grid = log_checkpoint_grid(horizon, 200);
  const auto start = std::chrono::steady_clock::now();
  const auto trace = run_single(big, rq, grid);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::uint64_t total = 0;
  for (auto c : trace.final_counts) total += c;

  const bool pass = identical && seconds < 10.0 && total == horizon;
  report(9, "reproducibility-throughput", pass,
         std::string("worker-count outputs ") + (identical ? "identical" : "DIFFER") +
             ", K=20 T=5e6 run took " + fmt(seconds) + " s");
  fs::remove_all(dir);
}

}  // namespace

int main() {
  std::printf("acceptance suite (workers=%u, master_seed=%llu)\n", kWorkers,
              static_cast<unsigned long long>(kMasterSeed));

  criterion_1_instance_fidelity();

  // shared batch: nu2, alpha 0.3, T=1e6, delta=K^2/T^2, 100 runs per variant
  const std::uint64_t horizon = 1000000;
  const double delta = default_delta(12, horizon);
  const auto grid = log_checkpoint_grid(horizon, 100);
  const std::vector<std::uint64_t> snaps{horizon / 2, horizon};
  const auto cof_runs = run_many(nu2(), make_requests(Algorithm::cof, 0.3, 100, horizon, delta),
                                 grid, snaps, kWorkers);
  const auto nocomb_runs =
      run_many(nu2(), make_requests(Algorithm::cof_no_combine, 0.3, 100, horizon, delta), grid,
               snaps, kWorkers);

  criterion_2_episode_trajectory(cof_runs, horizon);
  criterion_3_combining_ablation(cof_runs, nocomb_runs);
  criterion_4_exclusive_ablation();
  criterion_5_cheap_arm_sample_law(cof_runs);
  criterion_6_bounds_oracle();

  std::vector<RunTrace> all;
  all.insert(all.end(), cof_runs.begin(), cof_runs.end());
  all.insert(all.end(), nocomb_runs.begin(), nocomb_runs.end());
  criterion_7_decomposition(all);

  criterion_8_baseline_fragility();
  criterion_9_reproducibility_throughput();

  int failures = 0;
  for (const auto& c : g_results) failures += c.pass ? 0 : 1;
  std::printf("%d/%zu criteria passed\n", static_cast<int>(g_results.size()) - failures,
              g_results.size());
  return failures > 0 ? 1 : 0;
}
