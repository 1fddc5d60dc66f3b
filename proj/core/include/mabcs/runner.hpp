#pragma once
/*
Experiment harness: JSON sweep configuration, stable seed derivation,
deterministic single-run execution, run-level parallelism with
shared-nothing workers, CSV trace output, and percentile aggregation.
*/

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mabcs/cof.hpp"
#include "mabcs/instance.hpp"
#include "mabcs/metrics.hpp"
#include "mabcs/policy.hpp"

namespace mabcs {

enum class Algorithm {
  cof,
  cof_no_exclusive,
  cof_no_combine,
  etc_cs,
  ucb_cs,
  ts_cs,
  pe_cs_style,
};

std::string_view algorithm_name(Algorithm a);
std::optional<Algorithm> algorithm_from_name(std::string_view name);
bool is_cof_variant(Algorithm a);

struct ExperimentConfig {
  std::string instance_path;
  std::vector<Algorithm> algorithms;
  std::vector<double> alphas;
  std::uint64_t horizon{0};
  std::uint32_t num_runs{0};
  std::uint64_t master_seed{0};
  std::optional<double> delta_override;
  std::size_t checkpoint_count{200};
  std::string output_dir;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parses the JSON sweep document; unknown keys are rejected.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);
void validate(const ExperimentConfig& config, std::size_t num_arms);

// Error tolerance used by COF variants and pe_cs_style unless overridden.
double default_delta(std::size_t num_arms, std::uint64_t horizon);

// Stable 64-bit seed for one run, independent of execution order and worker
// count: SplitMix64 mixing over (master_seed, FNV-1a of the algorithm name,
// the IEEE-754 bits of alpha, run_index).
std::uint64_t derive_seed(std::uint64_t master_seed, std::string_view algorithm, double alpha,
                          std::uint32_t run_index);

std::unique_ptr<Policy> make_policy(Algorithm algorithm, std::size_t num_arms, double alpha,
                                    std::uint64_t horizon, double delta, std::uint64_t seed);

struct RunRequest {
  Algorithm algorithm{Algorithm::cof};
  double alpha{0.0};
  std::uint32_t run_index{0};
  std::uint64_t horizon{0};
  double delta{0.0};
  std::uint64_t seed{0};
};

struct RunTrace {
  std::string run_id;
  Algorithm algorithm{Algorithm::cof};
  double alpha{0.0};
  std::uint32_t run_index{0};
  std::uint64_t seed{0};
  std::vector<RegretAccumulator::Checkpoint> checkpoints;
  std::vector<std::uint64_t> final_counts;
  std::vector<EpisodeEvent> events;  // COF variants only
  // counts copied at caller-requested times, e.g. mid-horizon
  std::vector<std::pair<std::uint64_t, std::vector<std::uint64_t>>> count_snapshots;
  std::uint64_t dominance_violations{0};
  std::uint64_t exclusive_violations{0};
  // checkpoints where the accumulator and the policy's own counts disagreed
  std::uint64_t decomposition_mismatches{0};
};

std::string run_id_of(Algorithm algorithm, double alpha, std::uint32_t run_index);

// One deterministic run: the instance's alpha is replaced by request.alpha
// before analysis. Exactly request.horizon samples are drawn.
RunTrace run_single(const BanditInstance& instance, const RunRequest& request,
                    std::span<const std::uint64_t> checkpoint_grid,
                    std::span<const std::uint64_t> snapshot_times = {});

// Executes independent runs across workers; results are positionally stable
// and identical for any worker count.
std::vector<RunTrace> run_many(const BanditInstance& instance,
                               std::span<const RunRequest> requests,
                               std::span<const std::uint64_t> checkpoint_grid,
                               std::span<const std::uint64_t> snapshot_times, unsigned workers);

// Full sweep: algorithms x alphas x num_runs, per-run curve and event CSVs
// under <output_dir>/runs and <output_dir>/events, then aggregate.csv and
// terminal.csv. Rerunning an identical config reproduces every byte.
void run_sweep(const ExperimentConfig& config, unsigned workers);

// Rebuilds aggregate.csv and terminal.csv from <dir>/runs/*.csv.
void aggregate_directory(const std::string& dir);

// Percentile with linear interpolation between order statistics; q in [0,1].
double percentile_sorted(std::span<const double> sorted_values, double q);

}  // namespace mabcs
