#include "mabcs/cof.hpp"

#include <algorithm>

namespace mabcs {

std::vector<std::size_t> gating_set(std::span<const ArmState> states, std::size_t ell,
                                    double alpha) {
  std::vector<std::size_t> g;
  for (std::size_t i = ell + 1; i < states.size(); ++i) {
    if ((1.0 - alpha) * states[i].ucb >= states[ell].lcb) g.push_back(i);
  }
  return g;
}

CofPolicy::CofPolicy(std::size_t num_arms, double alpha, const CofConfig& config)
    : num_arms_(num_arms),
      alpha_(alpha),
      config_(config),
      scheme_(config.delta),
      log_delta_(std::log(config.delta)),
      states_(num_arms) {
  if (num_arms_ == 0) throw std::invalid_argument("CofPolicy needs at least one arm");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must be in (0, 1)");
  if (!(config.delta > 0.0 && config.delta < 1.0)) {
    throw std::invalid_argument("delta must be in (0, 1)");
  }
  // initialization round: one sample of every arm before any decision
  queue_.resize(num_arms_);
  for (std::size_t i = 0; i < num_arms_; ++i) queue_[i] = i;
  log_eps_.resize(num_arms_);
}

std::size_t CofPolicy::next_arm(std::uint64_t t) {
  if (committed_) return *committed_;
  if (queue_head_ < queue_.size()) return queue_[queue_head_++];
  return decision_pass(t);
}

void CofPolicy::observe(std::size_t arm, int reward) { states_[arm].update(reward, scheme_); }

std::string_view CofPolicy::name() const {
  if (!config_.exclusive_sampling) return "cof_no_exclusive";
  if (!config_.combine_samples) return "cof_no_combine";
  return "cof";
}

std::vector<std::uint64_t> CofPolicy::arm_counts() const {
  std::vector<std::uint64_t> counts(num_arms_);
  for (std::size_t i = 0; i < num_arms_; ++i) counts[i] = states_[i].n;
  return counts;
}

std::size_t CofPolicy::decision_pass(std::uint64_t t) {
  // Each pass either returns an arm or advances the candidate, so the loop
  // is bounded by the number of arms.
  for (std::size_t hops = 0; hops <= num_arms_; ++hops) {
    if (candidate_ >= num_arms_) {
      // Unreachable in exact arithmetic: the gating set of the most
      // expensive arm is empty, forcing commitment. Guarded regardless.
      guard_tripped_ = true;
      committed_ = num_arms_ - 1;
      events_.push_back({t, *committed_, EventKind::deemed_feasible});
      return *committed_;
    }

    gating_.clear();
    const double lcb_ell = states_[candidate_].lcb;
    for (std::size_t i = candidate_ + 1; i < num_arms_; ++i) {
      if ((1.0 - alpha_) * states_[i].ucb >= lcb_ell) gating_.push_back(i);
    }

    if (gating_.empty()) {
      committed_ = candidate_;
      events_.push_back({t, candidate_, EventKind::deemed_feasible});
      return candidate_;
    }

    const double ucb_ell = states_[candidate_].ucb;
    double sum_log = 0.0;
    double min_log = 0.0;
    for (std::size_t k = 0; k < num_arms_; ++k) {
      const double le = log_epsilon(states_[k].n, states_[k].mu_hat, ucb_ell, alpha_);
      log_eps_[k] = le;
      sum_log += le;
      min_log = std::min(min_log, le);
    }
    const bool combined = sum_log <= log_delta_;
    const bool single = min_log <= log_delta_;
    if (single && !combined) ++dominance_violations_;

    if (config_.combine_samples ? combined : single) {
      infeasible_.push_back(candidate_);
      events_.push_back({t, candidate_, EventKind::deemed_infeasible});
      ++candidate_;
      continue;
    }

    std::uint64_t max_n = 0;
    double max_lcb = states_[gating_.front()].lcb;
    for (std::size_t i : gating_) {
      max_n = std::max(max_n, states_[i].n);
      max_lcb = std::max(max_lcb, states_[i].lcb);
    }

    if (config_.exclusive_sampling && states_[candidate_].n < max_n) {
      return candidate_;
    }
    if (config_.exclusive_sampling && states_[candidate_].n < max_n) ++exclusive_violations_;

    // Uniform round: candidate now, then the gating arms that survive the
    // BAI-filter (ucb_i > max lcb over the gating set) in ascending index.
    queue_.clear();
    queue_head_ = 0;
    for (std::size_t i : gating_) {
      if (states_[i].ucb > max_lcb) queue_.push_back(i);
    }
    return candidate_;
  }
  throw std::logic_error("COF decision pass failed to terminate");
}

}  // namespace mabcs
