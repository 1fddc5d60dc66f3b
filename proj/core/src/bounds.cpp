#include "mabcs/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace mabcs {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kFeasibilityTol = 1e-9;

bool is_cheap(const InstanceAnalysis& a, std::size_t k) { return k < a.a_star; }
bool is_expensive(const InstanceAnalysis& a, std::size_t k) { return k > a.a_star; }

double beta_of(double n, double log_inv_delta) { return std::sqrt(log_inv_delta / (2.0 * n)); }

// BAI-filter cap on an arm's samples: 8 ln(1/delta) / reward_gap^2, infinite
// for arms sharing the best mean.
double bai_cap(double reward_gap, double log_inv_delta) {
  if (reward_gap <= 0.0) return kInf;
  return 8.0 * log_inv_delta / (reward_gap * reward_gap);
}

}  // namespace

double lb_cheap(const InstanceAnalysis& analysis, std::size_t k) {
  if (!is_cheap(analysis, k)) {
    throw std::invalid_argument("lb_cheap: arm " + std::to_string(k + 1) + " is not cheap");
  }
  const double gap = analysis.quality_gaps[k];
  return 2.0 / (gap * gap);
}

double lb_expensive(const InstanceAnalysis& analysis, std::size_t k) {
  if (!is_expensive(analysis, k)) {
    throw std::invalid_argument("lb_expensive: arm " + std::to_string(k + 1) +
                                " is not expensive");
  }
  const double one_minus_alpha = 1.0 - analysis.alpha;
  const double denom = analysis.means[analysis.a_star] - one_minus_alpha * analysis.means[k];
  if (denom == 0.0) return kInf;
  return 2.0 * one_minus_alpha * one_minus_alpha / (denom * denom);
}

std::optional<JointBound> lb_joint(const InstanceAnalysis& analysis) {
  if (!analysis.a_dagger) return std::nullopt;
  JointBound jb;
  const double one_minus_alpha = 1.0 - analysis.alpha;
  jb.rhs = 2.0 * one_minus_alpha * one_minus_alpha;
  for (std::size_t k : analysis.dagger_capable) {
    const double g = analysis.dagger_gaps[k];
    jb.weights.emplace_back(k, g * g);
  }
  return jb;
}

EliminatorSet eliminator_set(const InstanceAnalysis& analysis, std::size_t ell) {
  EliminatorSet e;
  const double one_minus_alpha = 1.0 - analysis.alpha;
  const double mu_ell = analysis.means[ell];
  for (std::size_t i = 0; i < analysis.num_arms(); ++i) {
    if (one_minus_alpha * analysis.means[i] - mu_ell > 0.0) e.arms.push_back(i);
  }
  std::stable_sort(e.arms.begin(), e.arms.end(), [&](std::size_t a, std::size_t b) {
    return analysis.means[a] > analysis.means[b];
  });
  for (std::size_t i : e.arms) {
    e.gaps.push_back(one_minus_alpha * analysis.means[i] - mu_ell);
    e.reward_gaps.push_back(analysis.reward_gaps[i]);
  }
  return e;
}

TauResult tau_search(const InstanceAnalysis& analysis, std::size_t ell, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("tau_search requires delta in (0, 1)");
  }
  const EliminatorSet e = eliminator_set(analysis, ell);
  if (e.arms.empty()) {
    throw std::invalid_argument("tau_search: no arm can eliminate arm " + std::to_string(ell + 1));
  }
  const double log_inv_delta = std::log(1.0 / delta);

  std::vector<double> prefix(e.arms.size() + 1, 0.0);
  for (std::size_t i = 0; i < e.arms.size(); ++i) {
    prefix[i + 1] = prefix[i] + e.gaps[i] * e.gaps[i];
  }

  TauResult best;
  bool found = false;
  for (std::size_t p = 1; p <= e.arms.size(); ++p) {
    const double root = 3.0 * std::sqrt(static_cast<double>(p)) + 1.0;
    const double tau_p = root * root / 2.0 * log_inv_delta / prefix[p];

    // Feasibility identity at n = tau_p: the unclipped top-p sum must equal
    // the indicator-gated clipped sum over the whole eliminator set.
    const double beta = beta_of(tau_p, log_inv_delta);
    double lhs = 0.0;
    for (std::size_t i = 0; i < p; ++i) {
      const double d = e.gaps[i] - 3.0 * beta;
      lhs += d * d;
    }
    double rhs = 0.0;
    for (std::size_t i = 0; i < e.arms.size(); ++i) {
      if (tau_p <= bai_cap(e.reward_gaps[i], log_inv_delta)) {
        const double d = std::max(e.gaps[i] - 3.0 * beta, 0.0);
        rhs += d * d;
      }
    }
    const bool feasible = std::abs(lhs - rhs) <= kFeasibilityTol * std::max({lhs, rhs, 1e-300});
    if (feasible && (!found || tau_p < best.tau_real)) {
      best.tau_real = tau_p;
      best.a_used = p;
      found = true;
    }
  }
  if (!found) {
    const double root = 3.0 * std::sqrt(static_cast<double>(e.arms.size())) + 1.0;
    best.tau_real = root * root / 2.0 * log_inv_delta / prefix[e.arms.size()];
    best.a_used = e.arms.size();
    best.fallback = true;
  }
  best.rounds = std::ceil(best.tau_real);
  return best;
}

std::uint64_t exact_tau(const InstanceAnalysis& analysis, std::size_t ell, double delta) {
  if (!(delta > 0.0 && delta <= 1.0)) {
    throw std::invalid_argument("exact_tau requires delta in (0, 1]");
  }
  const EliminatorSet e = eliminator_set(analysis, ell);
  if (e.arms.empty()) {
    throw std::invalid_argument("exact_tau: no arm can eliminate arm " + std::to_string(ell + 1));
  }
  const double log_inv_delta = std::log(1.0 / delta);

  double limit_d = 16.0;
  if (delta < 1.0) {
    limit_d = std::max(limit_d, std::ceil(10.0 * tau_search(analysis, ell, delta).rounds));
  }
  const auto limit = static_cast<std::uint64_t>(limit_d);

  std::vector<double> caps(e.arms.size());
  for (std::size_t i = 0; i < e.arms.size(); ++i) {
    caps[i] = bai_cap(e.reward_gaps[i], log_inv_delta);
  }

  for (std::uint64_t n = 1; n <= limit; ++n) {
    const double nd = static_cast<double>(n);
    const double beta = beta_of(nd, log_inv_delta);
    double sum = 0.0;
    for (std::size_t i = 0; i < e.arms.size(); ++i) {
      if (nd <= caps[i]) {
        const double d = e.gaps[i] - 3.0 * beta;
        if (d > 0.0) sum += d * d;
      }
    }
    if (sum >= beta * beta) return n;
  }
  throw std::runtime_error("exact_tau: no solution within 10x the closed-form bound for arm " +
                           std::to_string(ell + 1));
}

namespace {

struct DaggerContext {
  double episode_term{kInf};  // (3 sqrt(A) + 1)^2 ln T / sum of top-A squared dagger gaps
  bool present{false};
};

DaggerContext dagger_context(const InstanceAnalysis& analysis, double horizon, double delta) {
  DaggerContext ctx;
  if (!analysis.a_dagger) return ctx;
  ctx.present = true;
  const TauResult tr = tau_search(analysis, *analysis.a_dagger, delta);
  const EliminatorSet e = eliminator_set(analysis, *analysis.a_dagger);
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < tr.a_used; ++i) sum_sq += e.gaps[i] * e.gaps[i];
  const double root = 3.0 * std::sqrt(static_cast<double>(tr.a_used)) + 1.0;
  ctx.episode_term = root * root * std::log(horizon) / sum_sq;
  return ctx;
}

double gamma_dagger_for(const DaggerContext& ctx, const InstanceAnalysis& analysis, std::size_t k,
                        double horizon) {
  const double rgap = analysis.reward_gaps[k];
  const double bai_term = rgap > 0.0 ? 16.0 * std::log(horizon) / (rgap * rgap) : kInf;
  return std::min(ctx.episode_term, bai_term);
}

double gamma_astar_for(const InstanceAnalysis& analysis, std::size_t k, double horizon) {
  const double denom =
      analysis.means[analysis.a_star] - (1.0 - analysis.alpha) * analysis.means[k];
  if (denom == 0.0) return kInf;
  return 16.0 * std::log(horizon) / (denom * denom);
}

}  // namespace

GammaPair gamma(const InstanceAnalysis& analysis, std::size_t k, double horizon, double delta) {
  if (!is_expensive(analysis, k)) {
    throw std::invalid_argument("gamma: arm " + std::to_string(k + 1) + " is not expensive");
  }
  GammaPair g;
  const DaggerContext ctx = dagger_context(analysis, horizon, delta);
  if (ctx.present) g.gamma_dagger = gamma_dagger_for(ctx, analysis, k, horizon);
  g.gamma_astar = gamma_astar_for(analysis, k, horizon);
  return g;
}

std::pair<double, double> regret_upper_bounds(const InstanceAnalysis& analysis, double horizon,
                                              double delta) {
  const DaggerContext ctx = dagger_context(analysis, horizon, delta);
  const double k_count = static_cast<double>(analysis.num_arms());
  const double log_t = std::log(horizon);

  double cost_ub = 0.0;
  double quality_ub = 0.0;
  double sum_cost_gap_expensive = 0.0;
  double sum_quality_gap_all = 0.0;

  for (std::size_t k : analysis.cheap_arms) {
    quality_ub += 16.0 * log_t / std::max(analysis.quality_gaps[k], 0.0);
  }
  for (std::size_t k : analysis.expensive_arms) {
    double episodes = gamma_astar_for(analysis, k, horizon);
    if (ctx.present) episodes = std::max(episodes, gamma_dagger_for(ctx, analysis, k, horizon));
    const double cg = std::max(analysis.cost_gaps[k], 0.0);
    const double qg = std::max(analysis.quality_gaps[k], 0.0);
    cost_ub += episodes * cg;
    quality_ub += episodes * qg;
    sum_cost_gap_expensive += cg;
  }
  for (std::size_t k = 0; k < analysis.num_arms(); ++k) {
    sum_quality_gap_all += std::max(analysis.quality_gaps[k], 0.0);
  }
  cost_ub += k_count * sum_cost_gap_expensive;
  quality_ub += k_count * sum_quality_gap_all;
  return {cost_ub, quality_ub};
}

BoundReport bound_report(const InstanceAnalysis& analysis, double horizon, double delta) {
  const std::size_t k_count = analysis.num_arms();
  BoundReport r;
  r.lb_cheap.resize(k_count);
  r.lb_expensive.resize(k_count);
  r.joint_weight.resize(k_count);
  r.gamma_dagger.resize(k_count);
  r.gamma_astar.resize(k_count);

  for (std::size_t k : analysis.cheap_arms) r.lb_cheap[k] = lb_cheap(analysis, k);
  for (std::size_t k : analysis.expensive_arms) r.lb_expensive[k] = lb_expensive(analysis, k);
  if (const auto jb = lb_joint(analysis)) {
    for (const auto& [arm, w] : jb->weights) r.joint_weight[arm] = w;
  }

  const DaggerContext ctx = dagger_context(analysis, horizon, delta);
  if (ctx.present) {
    const TauResult tr = tau_search(analysis, *analysis.a_dagger, delta);
    r.tau_dagger = tr.rounds;
    r.a_used = tr.a_used;
  }
  for (std::size_t k : analysis.expensive_arms) {
    if (ctx.present) r.gamma_dagger[k] = gamma_dagger_for(ctx, analysis, k, horizon);
    r.gamma_astar[k] = gamma_astar_for(analysis, k, horizon);
  }

  const auto [cub, qub] = regret_upper_bounds(analysis, horizon, delta);
  r.cost_regret_ub = cub;
  r.quality_regret_ub = qub;
  return r;
}

}  // namespace mabcs
