#pragma once

#include <algorithm>
#include <cstdint>

namespace rlens {

/// Affine annealing from `start` at step 0 to `end` at `total_steps`,
/// constant afterwards. For DQN the rate is the epsilon-greedy probability;
/// for DDPG it scales the Gaussian action noise.
struct ExplorationSchedule {
  double start = 1.0;
  double end = 0.0;
  std::int64_t total_steps = 1;

  double rate(std::int64_t step) const {
    const double frac =
        std::min(1.0, static_cast<double>(step) / static_cast<double>(std::max<std::int64_t>(1, total_steps)));
    return start + (end - start) * frac;
  }
};

}  // namespace rlens
