#pragma once
/*
Closed-form calculators for the instance-dependent theory, all with natural
logarithms. Lower bounds are per-arm log T coefficients for cheap and
expensive arms plus a joint constraint over the arms capable of eliminating
the best-reward cheap arm. tau_search evaluates the candidate closed form
tau_{l,p} = (3 sqrt(p) + 1)^2 / 2 * ln(1/delta) / sum of the top-p squared
elimination gaps and keeps the smallest feasible candidate; exact_tau is the
brute-force integer search it bounds. The gamma quantities and the regret
upper bounds follow the same machinery.
*/

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "mabcs/instance.hpp"

namespace mabcs {

// Coefficient of log T in the cheap-arm sample lower bound: 2 / quality_gap^2.
double lb_cheap(const InstanceAnalysis& analysis, std::size_t k);

// Expensive-arm coefficient: 2 (1-alpha)^2 / (mu_{a*} - (1-alpha) mu_k)^2.
// Returns +infinity when the denominator vanishes.
double lb_expensive(const InstanceAnalysis& analysis, std::size_t k);

struct JointBound {
  std::vector<std::pair<std::size_t, double>> weights;  // arm -> squared dagger gap
  double rhs{0.0};                                      // 2 (1-alpha)^2
};

// Joint constraint sum_k weight_k E[n_k] >= rhs * log T; absent when there
// are no cheap arms.
std::optional<JointBound> lb_joint(const InstanceAnalysis& analysis);

// Arms capable of eliminating arm ell, reward-descending (lowest index on
// ties), with their elimination gaps (1-alpha) mu_i - mu_ell and reward gaps.
struct EliminatorSet {
  std::vector<std::size_t> arms;
  std::vector<double> gaps;         // elimination gaps, descending with arms
  std::vector<double> reward_gaps;  // mu_star - mu_i, aligned with arms
};
EliminatorSet eliminator_set(const InstanceAnalysis& analysis, std::size_t ell);

struct TauResult {
  double rounds{0.0};    // ceil of the winning candidate, in sampling rounds
  double tau_real{0.0};  // the candidate's closed-form value
  std::size_t a_used{0};
  bool fallback{false};  // no candidate passed the feasibility identity
};

// Smallest feasible closed-form candidate over p = 1..|A^ell|. Feasibility
// compares the unclipped top-p sum against the indicator-and-clip sum at the
// candidate value, within 1e-9 relative. Requires delta in (0, 1).
TauResult tau_search(const InstanceAnalysis& analysis, std::size_t ell, double delta);

// Brute-force oracle: smallest integer n >= 1 with
//   sum_{k in A^ell} 1{n <= 8 ln(1/delta)/reward_gap_k^2} ((gap_k - 3 beta)^+)^2 >= beta^2,
// by ascending scan, aborting past 10x the closed-form bound.
std::uint64_t exact_tau(const InstanceAnalysis& analysis, std::size_t ell, double delta);

struct GammaPair {
  std::optional<double> gamma_dagger;  // absent when there are no cheap arms
  double gamma_astar{0.0};
};

// Def-4 quantities for expensive arm k over horizon T; the number of
// participating arms A is taken from tau_search at the best-reward cheap arm.
GammaPair gamma(const InstanceAnalysis& analysis, std::size_t k, double horizon, double delta);

// Theorem-style cost/quality regret upper bounds over horizon T.
std::pair<double, double> regret_upper_bounds(const InstanceAnalysis& analysis, double horizon,
                                              double delta);

struct BoundReport {
  std::vector<std::optional<double>> lb_cheap;       // cheap arms only
  std::vector<std::optional<double>> lb_expensive;   // expensive arms only
  std::vector<std::optional<double>> joint_weight;   // arms in the dagger set
  std::vector<std::optional<double>> gamma_dagger;   // expensive arms only
  std::vector<std::optional<double>> gamma_astar;    // expensive arms only
  std::optional<double> tau_dagger;                  // tau_search at a_dagger, rounds
  std::optional<std::size_t> a_used;
  double cost_regret_ub{0.0};
  double quality_regret_ub{0.0};
};

BoundReport bound_report(const InstanceAnalysis& analysis, double horizon, double delta);

}  // namespace mabcs
