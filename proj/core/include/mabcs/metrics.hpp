#pragma once
/*
Exact cost/quality regret accounting. Incremental gaps are zero-clipped:
cost gap (c_k - c_{a*})^+ and quality gap (mu_cs - mu_k)^+, so only the
optimal arm adds zero to both. Checkpoint values are materialized from the
sample counts through the decomposition sum over arms in ascending index
order, which makes the incremental path and regret_from_counts agree bit
for bit.
*/

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "mabcs/instance.hpp"

namespace mabcs {

// The two sums of the regret decomposition, arms in ascending index order.
std::pair<double, double> regret_from_counts(std::span<const std::uint64_t> counts,
                                             const InstanceAnalysis& analysis);

// Log-spaced checkpoint grid on [1, horizon], deduplicated, always ending
// at the horizon.
std::vector<std::uint64_t> log_checkpoint_grid(std::uint64_t horizon, std::size_t points);

class RegretAccumulator {
 public:
  struct Checkpoint {
    std::uint64_t t{0};
    double cost_regret{0.0};
    double quality_regret{0.0};
  };

  RegretAccumulator(const InstanceAnalysis& analysis, std::vector<std::uint64_t> checkpoint_grid);

  void record(std::size_t arm);

  // Running draw-order sums; equal to the decomposition up to floating-point
  // associativity. Checkpoints carry the exact decomposition values.
  double cost_regret() const { return running_cost_; }
  double quality_regret() const { return running_quality_; }

  std::span<const std::uint64_t> counts() const { return counts_; }
  std::uint64_t total_samples() const { return total_; }
  const std::vector<Checkpoint>& checkpoints() const { return checkpoints_; }

  std::pair<double, double> decomposed() const;

 private:
  std::vector<double> cost_gap_;     // clipped
  std::vector<double> quality_gap_;  // clipped
  std::vector<std::uint64_t> counts_;
  std::vector<std::uint64_t> grid_;
  std::size_t next_checkpoint_{0};
  std::uint64_t total_{0};
  double running_cost_{0.0};
  double running_quality_{0.0};
  std::vector<Checkpoint> checkpoints_;
};

}  // namespace mabcs
