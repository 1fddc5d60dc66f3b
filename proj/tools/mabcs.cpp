// Command line front end: analyze instances, tabulate theoretical bounds,
// run seeded simulation sweeps, ingest ratings data, and aggregate run logs.
// Arm indices are printed 1-based to match the cost-order numbering used in
// instance files.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "mabcs/bounds.hpp"
#include "mabcs/instance.hpp"
#include "mabcs/runner.hpp"

namespace {

using namespace mabcs;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

BanditInstance load_instance(const std::string& path, double alpha_override) {
  auto parsed = parse_instance(read_file(path));
  if (parsed.resorted) {
    std::cerr << "warning: arms in " << path << " were not cost-sorted; re-sorted\n";
  }
  if (alpha_override > 0.0) parsed.instance.alpha = alpha_override;
  validate(parsed.instance);
  return parsed.instance;
}

std::string join_indices(const std::vector<std::size_t>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(xs[i] + 1);
  }
  return out;
}

std::string opt_str(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string{};
}

int cmd_analyze(const std::string& path, double alpha) {
  const auto inst = load_instance(path, alpha);
  const auto a = analyze(inst);
  std::cout << "alpha: " << format_double(a.alpha) << "\n";
  std::cout << "K: " << a.num_arms() << "\n";
  std::cout << "mu_star: " << format_double(a.mu_star) << " (arm " << a.i_star + 1 << ")\n";
  std::cout << "mu_cs: " << format_double(a.mu_cs) << "\n";
  std::cout << "a_star: " << a.a_star + 1 << "\n";
  std::cout << "feasible: " << join_indices(a.feasible_set) << "\n";
  std::cout << "cheap: " << join_indices(a.cheap_arms) << "\n";
  std::cout << "expensive: " << join_indices(a.expensive_arms) << "\n";
  if (a.a_dagger) {
    std::cout << "a_dagger: " << *a.a_dagger + 1
              << " (mu_dagger: " << format_double(a.mu_dagger) << ")\n";
    std::cout << "dagger_capable: " << join_indices(a.dagger_capable) << "\n";
  } else {
    std::cout << "a_dagger: none\n";
  }
  std::cout << "arm,mean,cost,quality_gap,cost_gap,reward_gap,dagger_gap\n";
  for (std::size_t k = 0; k < a.num_arms(); ++k) {
    std::cout << k + 1 << ',' << format_double(a.means[k]) << ',' << format_double(a.costs[k])
              << ',' << format_double(a.quality_gaps[k]) << ',' << format_double(a.cost_gaps[k])
              << ',' << format_double(a.reward_gaps[k]) << ','
              << (a.dagger_gaps.empty() ? std::string{} : format_double(a.dagger_gaps[k]))
              << "\n";
  }
  return 0;
}

int cmd_bounds(const std::string& path, double alpha, double horizon, double delta) {
  const auto inst = load_instance(path, alpha);
  const auto a = analyze(inst);
  if (delta <= 0.0) delta = 1.0 / (horizon * horizon);
  const auto r = bound_report(a, horizon, delta);
  std::cout << "arm,lb_cheap,lb_expensive,joint_weight,gamma_dagger,gamma_astar\n";
  for (std::size_t k = 0; k < a.num_arms(); ++k) {
    std::cout << k + 1 << ',' << opt_str(r.lb_cheap[k]) << ',' << opt_str(r.lb_expensive[k])
              << ',' << opt_str(r.joint_weight[k]) << ',' << opt_str(r.gamma_dagger[k]) << ','
              << opt_str(r.gamma_astar[k]) << "\n";
  }
  std::cout << "summary,tau_dagger=" << opt_str(r.tau_dagger)
            << ",A_used=" << (r.a_used ? std::to_string(*r.a_used) : std::string{})
            << ",cost_ub=" << format_double(r.cost_regret_ub)
            << ",quality_ub=" << format_double(r.quality_regret_ub) << "\n";
  return 0;
}

int cmd_simulate(const std::string& config_path, unsigned workers) {
  const auto cfg = load_config(config_path);
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  run_sweep(cfg, workers);
  std::cout << "sweep complete: " << cfg.output_dir << "\n";
  return 0;
}

int cmd_ingest(const std::string& ratings_path, const std::string& genres_path, double scale_max,
               std::uint64_t cost_seed, double alpha, const std::string& out_path) {
  std::ifstream ratings(ratings_path);
  if (!ratings) throw std::runtime_error("cannot open file: " + ratings_path);
  std::ifstream genres(genres_path);
  if (!genres) throw std::runtime_error("cannot open file: " + genres_path);
  const auto res = ingest_ratings(ratings, genres, {scale_max, cost_seed, alpha});
  for (const auto& g : res.excluded_genres) {
    std::cerr << "warning: genre '" << g << "' has no ratings; excluded\n";
  }
  if (res.unmapped_items > 0) {
    std::cerr << "warning: " << res.unmapped_items << " rating rows had no genre mapping\n";
  }
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write file: " + out_path);
  out << format_instance(res.instance, res.genres);
  std::cout << "wrote " << res.instance.num_arms() << " arms to " << out_path << "\n";
  return 0;
}

int cmd_aggregate(const std::string& dir) {
  aggregate_directory(dir);
  std::cout << "wrote " << (std::filesystem::path(dir) / "aggregate.csv").string() << " and "
            << (std::filesystem::path(dir) / "terminal.csv").string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation toolkit for bandits with a cost subsidy"};
  app.require_subcommand(1);

  std::string instance_path, config_path, ratings_path, genres_path, out_path, agg_dir;
  double alpha = 0.0;       // 0: use the instance file's alpha
  double horizon = 1e6;
  double delta = 0.0;       // 0: default 1/T^2
  double scale_max = 5.0;
  std::uint64_t cost_seed = 0;
  double ingest_alpha = 0.3;
  unsigned workers = 0;

  auto* analyze_cmd = app.add_subcommand("analyze", "Print the static analysis of an instance");
  analyze_cmd->add_option("instance", instance_path, "instance file")->required();
  analyze_cmd->add_option("--alpha", alpha, "override the instance's subsidy factor");

  auto* bounds_cmd = app.add_subcommand("bounds", "Tabulate theoretical bounds as CSV");
  bounds_cmd->add_option("instance", instance_path, "instance file")->required();
  bounds_cmd->add_option("--alpha", alpha, "override the instance's subsidy factor");
  bounds_cmd->add_option("--horizon", horizon, "horizon T")->required();
  bounds_cmd->add_option("--delta", delta, "error tolerance (default 1/T^2)");

  auto* sim_cmd = app.add_subcommand("simulate", "Run a sweep described by a JSON config");
  sim_cmd->add_option("config", config_path, "JSON sweep configuration")->required();
  sim_cmd->add_option("--workers", workers, "worker threads (default: hardware)");

  auto* ingest_cmd = app.add_subcommand("ingest", "Build an instance from ratings CSVs");
  ingest_cmd->add_option("ratings", ratings_path, "CSV rows item_id,rating")->required();
  ingest_cmd->add_option("genres", genres_path, "CSV rows item_id,genre")->required();
  ingest_cmd->add_option("--scale-max", scale_max, "rating scale maximum")->required();
  ingest_cmd->add_option("--cost-seed", cost_seed, "seed for uniform cost draws")->required();
  ingest_cmd->add_option("--alpha", ingest_alpha, "subsidy factor written to the instance");
  ingest_cmd->add_option("-o,--output", out_path, "output instance file")->required();

  auto* agg_cmd = app.add_subcommand("aggregate", "Re-aggregate a sweep output directory");
  agg_cmd->add_option("dir", agg_dir, "directory containing runs/")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (analyze_cmd->parsed()) return cmd_analyze(instance_path, alpha);
    if (bounds_cmd->parsed()) return cmd_bounds(instance_path, alpha, horizon, delta);
    if (sim_cmd->parsed()) return cmd_simulate(config_path, workers);
    if (ingest_cmd->parsed()) {
      return cmd_ingest(ratings_path, genres_path, scale_max, cost_seed, ingest_alpha, out_path);
    }
    if (agg_cmd->parsed()) return cmd_aggregate(agg_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
