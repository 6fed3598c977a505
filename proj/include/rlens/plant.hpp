#pragma once

#include <algorithm>
#include <cmath>

#include "rlens/env.hpp"
#include "rlens/rng.hpp"

namespace rlens {

/// Reference-tracking plant with a hard safety envelope: two-state damped
/// double integrator x' = A x + B u + w, w a seeded bounded disturbance on
/// the velocity. The reward is 1 - max_i |x_i| / limit, clamped to [0,1] and
/// maximal when the state sits on the origin reference. Crossing the safety
/// limit ends the episode with the configured minimum reward (default 0).
///
/// Discrete variant: 5 force levels {-1, -0.5, 0, 0.5, 1}. Continuous
/// variant: u in [-1, 1].
class PlantEnv : public Env {
 public:
  explicit PlantEnv(const EnvConfig& config)
      : params_(config.plant),
        action_mode_(config.action_mode),
        horizon_(config.horizon),
        phase_(config.phase),
        rng_(config.seed) {
    config.validate();
    if (params_.safety_limit <= 0.0) throw ConfigError("plant: safety limit must be > 0");
    if (action_mode_ == ActionMode::discrete) {
      space_ = ActionSpace::discrete(kNumDiscreteActions);
    } else {
      space_ = ActionSpace::continuous({-1.0}, {1.0});
    }
  }

  const ActionSpace& action_space() const override { return space_; }
  int observation_size() const override { return 2; }
  int horizon() const override { return horizon_; }
  Phase phase() const override { return phase_; }

  Observation reset(std::uint64_t episode_seed) override {
    PhaseAccessLog::record(phase_);
    rng_.set_state(episode_seed);
    x1_ = rng_.uniform(-params_.initial_state_bound, params_.initial_state_bound);
    x2_ = rng_.uniform(-params_.initial_state_bound, params_.initial_state_bound);
    step_count_ = 0;
    done_ = false;
    return {x1_, x2_};
  }

  StepOutcome step(const Action& action) override {
    if (done_) throw ContractError("plant: episode already terminal");

    double u = 0.0;
    if (action_mode_ == ActionMode::discrete) {
      static constexpr double kLevels[kNumDiscreteActions] = {-1.0, -0.5, 0.0, 0.5, 1.0};
      u = kLevels[detail::require_discrete(action, kNumDiscreteActions)];
    } else {
      u = detail::require_continuous(action, space_)[0];
    }

    const double w = params_.disturbance_bound > 0.0
                         ? rng_.uniform(-params_.disturbance_bound, params_.disturbance_bound)
                         : 0.0;
    const double n1 = params_.a11 * x1_ + params_.a12 * x2_ + params_.b1 * u;
    const double n2 = params_.a21 * x1_ + params_.a22 * x2_ + params_.b2 * u + w;
    x1_ = n1;
    x2_ = n2;
    ++step_count_;

    StepOutcome out;
    const double worst = std::max(std::fabs(x1_), std::fabs(x2_));
    const bool violated = worst > params_.safety_limit;
    if (violated) {
      out.raw_reward = params_.violation_reward;
      done_ = true;
      out.info["limit_violation"] = 1.0;
    } else {
      out.raw_reward = std::clamp(1.0 - worst / params_.safety_limit, 0.0, 1.0);
      done_ = step_count_ >= horizon_;
      out.info["limit_violation"] = 0.0;
    }
    out.info["tracking_error"] = worst;
    out.terminal = done_;
    out.next_observation = {x1_, x2_};
    return out;
  }

  static constexpr int kNumDiscreteActions = 5;

 private:
  PlantParams params_;
  ActionMode action_mode_;
  int horizon_;
  Phase phase_;
  ActionSpace space_;
  Rng rng_;

  double x1_ = 0.0;
  double x2_ = 0.0;
  int step_count_ = 0;
  bool done_ = true;
};

}  // namespace rlens
