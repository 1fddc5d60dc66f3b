#pragma once
/*
Comparison policies behind the same stepping interface as COF.

  etc_cs  - explore-then-commit with a fixed exploration budget, then commit
            to the cheapest arm whose empirical mean clears (1-alpha) times
            the best empirical mean.
  ucb_cs  - empirically feasible set from UCB index values, cheapest member.
  ts_cs   - same selection rule on Thompson posterior draws, Beta(1,1) prior.
  pe_cs   - two-phase reconstruction: best-arm identification by successive
            elimination, then cost-ordered pairwise feasibility tests against
            the identified arm. Labeled pe_cs_style in output files.
*/

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mabcs/policy.hpp"
#include "mabcs/rng.hpp"
#include "mabcs/sampler.hpp"

namespace mabcs {

enum class BaselineKind { etc_cs, ucb_cs, ts_cs, pe_cs };

struct BaselineConfig {
  BaselineKind kind{BaselineKind::etc_cs};
  double etc_budget_fraction{0.2};
  double delta{0.0};  // used by pe_cs only
};

// Shared selection rule of UCB-CS/TS-CS: the empirically feasible set
// F = { k : value_k >= (1 - alpha) * max_j value_j }, cheapest (lowest
// index) member. F always contains the arg max, so it is never empty.
std::size_t cheapest_feasible_by_value(std::span<const double> values, double alpha);

class EtcCsPolicy final : public Policy {
 public:
  EtcCsPolicy(std::size_t num_arms, double alpha, std::uint64_t horizon,
              double budget_fraction = 0.2);

  std::size_t next_arm(std::uint64_t t) override;
  void observe(std::size_t arm, int reward) override;
  std::string_view name() const override { return "etc_cs"; }
  std::vector<std::uint64_t> arm_counts() const override { return counts_; }

  std::uint64_t budget() const { return budget_; }
  std::optional<std::size_t> committed() const { return committed_; }

 private:
  std::size_t num_arms_;
  double alpha_;
  std::uint64_t budget_;
  std::vector<std::uint64_t> counts_;
  std::vector<double> sums_;
  std::optional<std::size_t> committed_;
};

class UcbCsPolicy final : public Policy {
 public:
  UcbCsPolicy(std::size_t num_arms, double alpha);

  std::size_t next_arm(std::uint64_t t) override;
  void observe(std::size_t arm, int reward) override;
  std::string_view name() const override { return "ucb_cs"; }
  std::vector<std::uint64_t> arm_counts() const override { return counts_; }

 private:
  std::size_t num_arms_;
  double alpha_;
  std::vector<std::uint64_t> counts_;
  std::vector<double> sums_;
  std::vector<double> values_;
};

class TsCsPolicy final : public Policy {
 public:
  TsCsPolicy(std::size_t num_arms, double alpha, std::uint64_t seed);

  std::size_t next_arm(std::uint64_t t) override;
  void observe(std::size_t arm, int reward) override;
  std::string_view name() const override { return "ts_cs"; }
  std::vector<std::uint64_t> arm_counts() const override;

 private:
  std::size_t num_arms_;
  double alpha_;
  CounterRng rng_;
  std::vector<std::uint64_t> successes_;
  std::vector<std::uint64_t> failures_;
  std::vector<double> draws_;
};

class PeCsPolicy final : public Policy {
 public:
  PeCsPolicy(std::size_t num_arms, double alpha, double delta);

  std::size_t next_arm(std::uint64_t t) override;
  void observe(std::size_t arm, int reward) override;
  std::string_view name() const override { return "pe_cs_style"; }
  std::vector<std::uint64_t> arm_counts() const override;

  bool phase_one_done() const { return identified_.has_value(); }
  std::optional<std::size_t> identified_best() const { return identified_; }
  std::optional<std::size_t> committed() const { return committed_; }

 private:
  void eliminate_round();

  std::size_t num_arms_;
  double alpha_;
  ConfidenceScheme scheme_;
  std::vector<ArmState> states_;

  std::vector<std::size_t> active_;  // phase 1 survivors
  std::size_t rr_pos_{0};
  std::optional<std::size_t> identified_;

  std::size_t candidate_{0};  // phase 2 cursor, cost order
  std::optional<std::size_t> committed_;
};

}  // namespace mabcs
