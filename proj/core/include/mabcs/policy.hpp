#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace mabcs {

// Stepping interface shared by COF and the baselines: the harness asks for
// one arm per timestep and feeds the observed reward back. Policies never
// see true means or costs; arm indices are cost order.
class Policy {
 public:
  virtual ~Policy() = default;

  // t is the number of samples already taken (0-based clock, t < T).
  virtual std::size_t next_arm(std::uint64_t t) = 0;
  virtual void observe(std::size_t arm, int reward) = 0;
  virtual std::string_view name() const = 0;

  // Per-arm sample counts from the policy's own bookkeeping; used to
  // cross-check the metrics module's accounting.
  virtual std::vector<std::uint64_t> arm_counts() const = 0;
};

}  // namespace mabcs
