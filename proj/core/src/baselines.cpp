#include "mabcs/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mabcs {

std::size_t cheapest_feasible_by_value(std::span<const double> values, double alpha) {
  double max_v = values[0];
  for (double v : values) max_v = std::max(max_v, v);
  const double threshold = (1.0 - alpha) * max_v;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (values[k] >= threshold) return k;
  }
  return values.size() - 1;  // unreachable: the arg max always qualifies
}

EtcCsPolicy::EtcCsPolicy(std::size_t num_arms, double alpha, std::uint64_t horizon,
                         double budget_fraction)
    : num_arms_(num_arms),
      alpha_(alpha),
      budget_(static_cast<std::uint64_t>(budget_fraction * static_cast<double>(horizon))),
      counts_(num_arms, 0),
      sums_(num_arms, 0.0) {
  if (!(budget_fraction > 0.0 && budget_fraction < 1.0)) {
    throw std::invalid_argument("etc budget fraction must be in (0, 1)");
  }
}

std::size_t EtcCsPolicy::next_arm(std::uint64_t t) {
  if (committed_) return *committed_;
  if (t < budget_) return static_cast<std::size_t>(t % num_arms_);
  std::vector<double> mu_hat(num_arms_, 0.0);
  for (std::size_t k = 0; k < num_arms_; ++k) {
    if (counts_[k] > 0) mu_hat[k] = sums_[k] / static_cast<double>(counts_[k]);
  }
  committed_ = cheapest_feasible_by_value(mu_hat, alpha_);
  return *committed_;
}

void EtcCsPolicy::observe(std::size_t arm, int reward) {
  ++counts_[arm];
  sums_[arm] += reward;
}

UcbCsPolicy::UcbCsPolicy(std::size_t num_arms, double alpha)
    : num_arms_(num_arms),
      alpha_(alpha),
      counts_(num_arms, 0),
      sums_(num_arms, 0.0),
      values_(num_arms, 0.0) {}

std::size_t UcbCsPolicy::next_arm(std::uint64_t t) {
  if (t < num_arms_) return static_cast<std::size_t>(t);  // one sample of each arm
  const double log_t = std::log(static_cast<double>(t));
  for (std::size_t k = 0; k < num_arms_; ++k) {
    const double mean = sums_[k] / static_cast<double>(counts_[k]);
    values_[k] = mean + std::sqrt(2.0 * log_t / static_cast<double>(counts_[k]));
  }
  return cheapest_feasible_by_value(values_, alpha_);
}

void UcbCsPolicy::observe(std::size_t arm, int reward) {
  ++counts_[arm];
  sums_[arm] += reward;
}

TsCsPolicy::TsCsPolicy(std::size_t num_arms, double alpha, std::uint64_t seed)
    : num_arms_(num_arms),
      alpha_(alpha),
      rng_(seed),
      successes_(num_arms, 0),
      failures_(num_arms, 0),
      draws_(num_arms, 0.0) {}

std::size_t TsCsPolicy::next_arm(std::uint64_t /*t*/) {
  for (std::size_t k = 0; k < num_arms_; ++k) {
    draws_[k] = rng_.next_beta(1.0 + static_cast<double>(successes_[k]),
                               1.0 + static_cast<double>(failures_[k]));
  }
  return cheapest_feasible_by_value(draws_, alpha_);
}

void TsCsPolicy::observe(std::size_t arm, int reward) {
  if (reward > 0) {
    ++successes_[arm];
  } else {
    ++failures_[arm];
  }
}

std::vector<std::uint64_t> TsCsPolicy::arm_counts() const {
  std::vector<std::uint64_t> counts(num_arms_);
  for (std::size_t k = 0; k < num_arms_; ++k) counts[k] = successes_[k] + failures_[k];
  return counts;
}

PeCsPolicy::PeCsPolicy(std::size_t num_arms, double alpha, double delta)
    : num_arms_(num_arms), alpha_(alpha), scheme_(delta), states_(num_arms) {
  active_.resize(num_arms);
  for (std::size_t i = 0; i < num_arms; ++i) active_[i] = i;
}

void PeCsPolicy::eliminate_round() {
  double max_lcb = states_[active_.front()].lcb;
  for (std::size_t i : active_) max_lcb = std::max(max_lcb, states_[i].lcb);
  std::vector<std::size_t> kept;
  for (std::size_t i : active_) {
    if (!(states_[i].ucb < max_lcb)) kept.push_back(i);
  }
  active_ = std::move(kept);
  if (active_.size() == 1) identified_ = active_.front();
}

std::size_t PeCsPolicy::next_arm(std::uint64_t /*t*/) {
  if (committed_) return *committed_;

  if (!identified_) {
    // phase 1: round-robin over survivors, eliminate at round boundaries
    if (rr_pos_ >= active_.size()) {
      eliminate_round();
      rr_pos_ = 0;
      if (identified_) return next_arm(0);
    }
    return active_[rr_pos_++];
  }

  // phase 2: cost-ordered feasibility tests against the identified arm
  const std::size_t best = *identified_;
  while (candidate_ < num_arms_) {
    const ArmState& cand = states_[candidate_];
    if (cand.ucb < (1.0 - alpha_) * states_[best].lcb) {
      ++candidate_;  // infeasible, move to the next cheapest
      continue;
    }
    if (cand.lcb >= (1.0 - alpha_) * states_[best].ucb) {
      committed_ = candidate_;
      return *committed_;
    }
    return cand.n <= states_[best].n ? candidate_ : best;
  }
  committed_ = best;  // all candidates rejected: fall back to the best arm
  return *committed_;
}

void PeCsPolicy::observe(std::size_t arm, int reward) { states_[arm].update(reward, scheme_); }

std::vector<std::uint64_t> PeCsPolicy::arm_counts() const {
  std::vector<std::uint64_t> counts(num_arms_);
  for (std::size_t k = 0; k < num_arms_; ++k) counts[k] = states_[k].n;
  return counts;
}

}  // namespace mabcs
