#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "rlens/error.hpp"
#include "rlens/timeseries.hpp"

namespace rlens {

enum class EnvId { microgrid, safety_plant };
enum class ActionMode { discrete, continuous };
enum class Phase { train, validation, test };

inline const char* to_string(EnvId id) {
  return id == EnvId::microgrid ? "microgrid" : "safety_plant";
}
inline const char* to_string(ActionMode m) {
  return m == ActionMode::discrete ? "discrete" : "continuous";
}
inline const char* to_string(Phase p) {
  switch (p) {
    case Phase::train: return "train";
    case Phase::validation: return "validation";
    case Phase::test: return "test";
  }
  return "?";
}

inline EnvId env_id_from_string(const std::string& s) {
  if (s == "microgrid") return EnvId::microgrid;
  if (s == "safety_plant" || s == "plant") return EnvId::safety_plant;
  throw ConfigError("unknown env id: " + s);
}
inline ActionMode action_mode_from_string(const std::string& s) {
  if (s == "discrete") return ActionMode::discrete;
  if (s == "continuous") return ActionMode::continuous;
  throw ConfigError("unknown action mode: " + s);
}
inline Phase phase_from_string(const std::string& s) {
  if (s == "train") return Phase::train;
  if (s == "validation") return Phase::validation;
  if (s == "test") return Phase::test;
  throw ConfigError("unknown phase: " + s);
}

using Observation = std::vector<double>;

/// Either a discrete action catalog or a box in R^dim.
struct ActionSpace {
  ActionMode kind = ActionMode::discrete;
  int n = 0;                 // discrete: number of actions (>= 2)
  int dim = 0;               // continuous: action dimension
  std::vector<double> low;   // continuous bounds, low < high elementwise
  std::vector<double> high;

  static ActionSpace discrete(int n_actions) {
    if (n_actions < 2) throw ConfigError("discrete action space needs n >= 2");
    ActionSpace s;
    s.kind = ActionMode::discrete;
    s.n = n_actions;
    return s;
  }
  static ActionSpace continuous(std::vector<double> lo, std::vector<double> hi) {
    if (lo.empty() || lo.size() != hi.size()) {
      throw ConfigError("continuous action space: bounds size mismatch");
    }
    for (std::size_t i = 0; i < lo.size(); ++i) {
      if (!(lo[i] < hi[i])) throw ConfigError("continuous action space: low must be < high");
    }
    ActionSpace s;
    s.kind = ActionMode::continuous;
    s.dim = static_cast<int>(lo.size());
    s.low = std::move(lo);
    s.high = std::move(hi);
    return s;
  }
};

/// Discrete action index or continuous action vector.
using Action = std::variant<int, std::vector<double>>;

struct StepOutcome {
  Observation next_observation;
  double raw_reward = 0.0;
  bool terminal = false;
  std::map<std::string, double> info;
};

/// Microgrid component parameters. Energy accounting treats one step as one
/// hour, so kW and kWh coincide numerically.
struct MicrogridParams {
  double battery_capacity_kwh = 50.0;
  double battery_max_charge_kw = 10.0;
  double battery_max_discharge_kw = 10.0;
  double battery_efficiency = 0.9;  // round trip, applied on charge
  double genset_capacity_kw = 20.0;
  double genset_cost_per_kwh = 0.5;
  double grid_buy_per_kwh = 0.2;
  double grid_sell_per_kwh = 0.05;
  double grid_max_exchange_kw = 20.0;
  double outage_probability = 0.05;  // per step, seeded
  double penalty_per_kwh = 2.0;      // unmet demand
  double initial_soc_frac = 0.5;
  int steps_per_day = 96;  // diurnal period of the series
};

/// Damped discretized double integrator with a hard safety envelope.
struct PlantParams {
  double a11 = 1.0, a12 = 0.1;
  double a21 = 0.0, a22 = 0.9;
  double b1 = 0.005, b2 = 0.1;
  double safety_limit = 1.0;         // |x_i| <= limit, else episode ends
  double disturbance_bound = 0.02;   // uniform in [-bound, bound] on velocity
  double violation_reward = 0.0;     // lowest possible reward on violation
  double initial_state_bound = 0.5;  // x0 ~ U[-bound, bound]^2
};

struct EnvConfig {
  EnvId env_id = EnvId::microgrid;
  ActionMode action_mode = ActionMode::discrete;
  int horizon = 96;
  Phase phase = Phase::train;
  std::uint64_t seed = 0;
  std::string timeseries_path;  // empty: bundled synthetic series
  PhaseSplit phase_split;       // all-zero: default 70/10/20 split
  MicrogridParams microgrid;
  PlantParams plant;

  void validate() const {
    if (horizon < 1) throw ConfigError("horizon must be >= 1");
  }
};

/// Counts environment resets per phase. Test hook backing the data-hygiene
/// assertion that nothing touches the test phase before final selection.
class PhaseAccessLog {
 public:
  static void record(Phase p) { counter(p).fetch_add(1, std::memory_order_relaxed); }
  static long count(Phase p) { return counter(p).load(std::memory_order_relaxed); }
  static void reset() {
    for (Phase p : {Phase::train, Phase::validation, Phase::test}) {
      counter(p).store(0, std::memory_order_relaxed);
    }
  }

 private:
  static std::atomic<long>& counter(Phase p) {
    static std::atomic<long> counters[3];
    return counters[static_cast<int>(p)];
  }
};

/// A single-threaded seeded state machine. One instance per agent or worker;
/// instances may move between threads but are never shared concurrently.
class Env {
 public:
  virtual ~Env() = default;

  virtual const ActionSpace& action_space() const = 0;
  virtual int observation_size() const = 0;
  virtual int horizon() const = 0;
  virtual Phase phase() const = 0;

  /// Starts a fresh episode. All episode randomness (outages, disturbances,
  /// initial state) derives from `episode_seed`.
  virtual Observation reset(std::uint64_t episode_seed) = 0;

  /// Advances one step. Throws ContractError on out-of-range actions or when
  /// the episode already ended.
  virtual StepOutcome step(const Action& action) = 0;
};

namespace detail {

inline int require_discrete(const Action& a, int n) {
  const int* idx = std::get_if<int>(&a);
  if (idx == nullptr) throw ContractError("expected a discrete action index");
  if (*idx < 0 || *idx >= n) {
    throw ContractError("action index " + std::to_string(*idx) + " outside [0," +
                        std::to_string(n - 1) + "]");
  }
  return *idx;
}

inline const std::vector<double>& require_continuous(const Action& a, const ActionSpace& space) {
  const auto* vec = std::get_if<std::vector<double>>(&a);
  if (vec == nullptr) throw ContractError("expected a continuous action vector");
  if (static_cast<int>(vec->size()) != space.dim) {
    throw ContractError("action dimension mismatch");
  }
  for (int d = 0; d < space.dim; ++d) {
    const double v = (*vec)[static_cast<std::size_t>(d)];
    if (!(v >= space.low[static_cast<std::size_t>(d)] &&
          v <= space.high[static_cast<std::size_t>(d)])) {
      throw ContractError("continuous action outside the action box");
    }
  }
  return *vec;
}

}  // namespace detail
}  // namespace rlens
