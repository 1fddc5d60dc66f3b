#pragma once
/*
Cost-Ordered Feasibility policy. Candidate arms are evaluated in cost order;
a candidate is deemed feasible once its gating set (more expensive arms whose
subsidized UCB still dominates the candidate's LCB) is empty, and infeasible
once the product of per-arm elimination error probabilities eps_{k,l} drops
to the tolerance delta. Two features can be ablated: combining samples
(product test vs. any single eps_{k,l} <= delta) and exclusive sampling
(candidate catch-up before uniform rounds).
*/

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "mabcs/policy.hpp"
#include "mabcs/sampler.hpp"

namespace mabcs {

struct CofConfig {
  double delta{0.0};
  bool combine_samples{true};
  bool exclusive_sampling{true};
};

enum class EventKind { deemed_infeasible, deemed_feasible };

struct EpisodeEvent {
  std::uint64_t t{0};  // samples already taken when the verdict fired
  std::size_t arm{0};
  EventKind kind{EventKind::deemed_infeasible};
};

// G_ell = { i in {ell+1, ..., K-1} : (1 - alpha) * ucb_i >= lcb_ell }.
std::vector<std::size_t> gating_set(std::span<const ArmState> states, std::size_t ell,
                                    double alpha);

// ln eps_{k,ell}: -2 n_k (mu_hat_k - ucb_ell/(1-alpha))^2 when mu_hat_k
// exceeds ucb_ell/(1-alpha) strictly, else 0. Requires n_k >= 1.
inline double log_epsilon(std::uint64_t n_k, double mu_hat_k, double ucb_ell, double alpha) {
  const double threshold = ucb_ell / (1.0 - alpha);
  if (!(mu_hat_k > threshold)) return 0.0;
  const double gap = mu_hat_k - threshold;
  return -2.0 * static_cast<double>(n_k) * gap * gap;
}

inline double epsilon(std::uint64_t n_k, double mu_hat_k, double ucb_ell, double alpha) {
  return std::exp(log_epsilon(n_k, mu_hat_k, ucb_ell, alpha));
}

// Product test of Algorithm line "prod eps <= delta", evaluated in log space.
inline bool combined_infeasibility(std::span<const double> log_eps, double log_delta) {
  double sum = 0.0;
  for (double le : log_eps) sum += le;
  return sum <= log_delta;
}

// Ablated test: some single arm is capable on its own.
inline bool any_single_infeasibility(std::span<const double> log_eps, double log_delta) {
  for (double le : log_eps) {
    if (le <= log_delta) return true;
  }
  return false;
}

class CofPolicy final : public Policy {
 public:
  CofPolicy(std::size_t num_arms, double alpha, const CofConfig& config);

  std::size_t next_arm(std::uint64_t t) override;
  void observe(std::size_t arm, int reward) override;
  std::string_view name() const override;
  std::vector<std::uint64_t> arm_counts() const override;

  const std::vector<ArmState>& arm_states() const { return states_; }
  const std::vector<EpisodeEvent>& events() const { return events_; }
  std::optional<std::size_t> committed() const { return committed_; }
  std::size_t candidate() const { return candidate_; }
  const std::vector<std::size_t>& infeasible_arms() const { return infeasible_; }

  // Sanity counters, expected to stay zero. dominance: the single-arm test
  // fired where the combined test did not (impossible since every eps <= 1).
  // exclusive: a uniform round started while the candidate still trailed.
  std::uint64_t dominance_violations() const { return dominance_violations_; }
  std::uint64_t exclusive_violations() const { return exclusive_violations_; }
  bool guard_tripped() const { return guard_tripped_; }

 private:
  std::size_t decision_pass(std::uint64_t t);

  std::size_t num_arms_;
  double alpha_;
  CofConfig config_;
  ConfidenceScheme scheme_;
  double log_delta_;

  std::vector<ArmState> states_;
  std::size_t candidate_{0};
  std::optional<std::size_t> committed_;
  std::vector<std::size_t> infeasible_;
  std::vector<EpisodeEvent> events_;

  std::vector<std::size_t> queue_;  // arms pending before the next decision pass
  std::size_t queue_head_{0};
  std::vector<std::size_t> gating_;
  std::vector<double> log_eps_;

  std::uint64_t dominance_violations_{0};
  std::uint64_t exclusive_violations_{0};
  bool guard_tripped_{false};
};

}  // namespace mabcs
