#include "mabcs/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace mabcs {

std::pair<double, double> regret_from_counts(std::span<const std::uint64_t> counts,
                                             const InstanceAnalysis& analysis) {
  double cost = 0.0;
  double quality = 0.0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    const double n = static_cast<double>(counts[k]);
    cost += std::max(analysis.cost_gaps[k], 0.0) * n;
    quality += std::max(analysis.quality_gaps[k], 0.0) * n;
  }
  return {cost, quality};
}

std::vector<std::uint64_t> log_checkpoint_grid(std::uint64_t horizon, std::size_t points) {
  std::vector<std::uint64_t> grid;
  if (horizon == 0) return grid;
  if (points < 2) {
    grid.push_back(horizon);
    return grid;
  }
  const double log_t = std::log(static_cast<double>(horizon));
  for (std::size_t i = 0; i < points; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(points - 1);
    auto t = static_cast<std::uint64_t>(std::llround(std::exp(f * log_t)));
    t = std::clamp<std::uint64_t>(t, 1, horizon);
    if (grid.empty() || t > grid.back()) grid.push_back(t);
  }
  if (grid.back() != horizon) grid.push_back(horizon);
  return grid;
}

RegretAccumulator::RegretAccumulator(const InstanceAnalysis& analysis,
                                     std::vector<std::uint64_t> checkpoint_grid)
    : counts_(analysis.num_arms(), 0), grid_(std::move(checkpoint_grid)) {
  const std::size_t k = analysis.num_arms();
  cost_gap_.resize(k);
  quality_gap_.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    cost_gap_[i] = std::max(analysis.cost_gaps[i], 0.0);
    quality_gap_[i] = std::max(analysis.quality_gaps[i], 0.0);
  }
  checkpoints_.reserve(grid_.size());
}

void RegretAccumulator::record(std::size_t arm) {
  ++counts_[arm];
  running_cost_ += cost_gap_[arm];
  running_quality_ += quality_gap_[arm];
  ++total_;
  if (next_checkpoint_ < grid_.size() && total_ == grid_[next_checkpoint_]) {
    const auto [c, q] = decomposed();
    checkpoints_.push_back({total_, c, q});
    ++next_checkpoint_;
  }
}

std::pair<double, double> RegretAccumulator::decomposed() const {
  double cost = 0.0;
  double quality = 0.0;
  for (std::size_t k = 0; k < counts_.size(); ++k) {
    const double n = static_cast<double>(counts_[k]);
    cost += cost_gap_[k] * n;
    quality += quality_gap_[k] * n;
  }
  return {cost, quality};
}

}  // namespace mabcs
