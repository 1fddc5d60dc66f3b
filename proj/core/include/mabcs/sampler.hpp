#pragma once
/*
Bernoulli reward environment and per-arm running statistics under the
Hoeffding confidence scheme: radius beta(n, delta) = sqrt(ln(1/delta) / 2n),
UCB = mu_hat + beta, LCB = mu_hat - beta.
*/

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "mabcs/instance.hpp"
#include "mabcs/rng.hpp"

namespace mabcs {

struct ConfidenceScheme {
  double delta{1.0};
  double log_inv_delta{0.0};

  ConfidenceScheme() = default;
  explicit ConfidenceScheme(double d) : delta(d) {
    if (!(d > 0.0 && d <= 1.0)) throw std::invalid_argument("delta must be in (0, 1]");
    log_inv_delta = std::log(1.0 / d);
  }

  double radius(std::uint64_t n) const {
    return std::sqrt(log_inv_delta / (2.0 * static_cast<double>(n)));
  }
};

// Confidence radius sqrt(ln(1/delta) / (2n)). Every arm must be sampled once
// before its bounds are read, so n = 0 is an error rather than a value.
inline double beta_radius(std::uint64_t n, double delta) {
  if (n == 0) throw std::invalid_argument("beta_radius requires n >= 1");
  return ConfidenceScheme(delta).radius(n);
}

struct ArmState {
  std::uint64_t n{0};
  std::uint64_t sum_rewards{0};
  double mu_hat{0.0};
  double ucb{0.0};
  double lcb{0.0};

  void update(int reward, const ConfidenceScheme& cs) {
    ++n;
    sum_rewards += static_cast<std::uint64_t>(reward);
    mu_hat = static_cast<double>(sum_rewards) / static_cast<double>(n);
    const double b = cs.radius(n);
    ucb = mu_hat + b;
    lcb = mu_hat - b;
  }
};

inline ArmState update(ArmState state, int reward, double delta) {
  state.update(reward, ConfidenceScheme(delta));
  return state;
}

// Stochastic {0,1} rewards, one independent counter stream per arm so the
// j-th draw of an arm is the same no matter when the policy requests it.
class RewardEnvironment {
 public:
  RewardEnvironment(const BanditInstance& inst, std::uint64_t run_seed)
      : means_(inst.means) {
    streams_.reserve(means_.size());
    for (std::size_t k = 0; k < means_.size(); ++k) {
      streams_.emplace_back(substream_seed(run_seed, static_cast<std::uint64_t>(k)));
    }
  }

  int sample(std::size_t arm) { return streams_[arm].next_bernoulli(means_[arm]); }

  std::size_t num_arms() const { return means_.size(); }

 private:
  std::vector<double> means_;
  std::vector<CounterRng> streams_;
};

}  // namespace mabcs
