#pragma once

#include <vector>

#include "mabcs/instance.hpp"

namespace mabcs::test {

// 7-arm ablation instance: the second-cheapest arm is optimal but low
// reward, so its sampling is paused early by the BAI-filter.
inline BanditInstance nu1() {
  BanditInstance inst;
  inst.means = {0.15, 0.24, 0.96, 0.95, 0.99, 0.98, 0.97};
  inst.costs = {1, 2, 3, 4, 5, 6, 7};
  inst.alpha = 0.8;
  return inst;
}

// 12-arm ablation instance with a cluster of nine high-reward arms.
inline BanditInstance nu2() {
  BanditInstance inst;
  inst.means = {0.44, 0.46, 0.48, 0.7, 0.71, 0.704, 0.714, 0.702, 0.716, 0.708, 0.712, 0.706};
  inst.costs = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
  inst.alpha = 0.3;
  return inst;
}

inline BanditInstance make_instance(std::vector<double> means, std::vector<double> costs,
                                    double alpha) {
  BanditInstance inst;
  inst.means = std::move(means);
  inst.costs = std::move(costs);
  inst.alpha = alpha;
  return inst;
}

}  // namespace mabcs::test
