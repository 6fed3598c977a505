#pragma once

#include <algorithm>
#include <cmath>
#include <utility>

#include "rlens/env.hpp"
#include "rlens/rng.hpp"

namespace rlens {

/// Battery/solar/genset microgrid with an unstable main-grid link.
///
/// Reward per step is -(operating cost + penalty): genset fuel plus grid
/// imports minus export revenue (floored at zero, so export revenue offsets
/// concurrent costs but never turns a step profitable), and penalty_per_kwh
/// for every kWh of unserved demand. Rewards are therefore always <= 0.
///
/// Discrete action catalog (dispatch priorities):
///   0 idle        nothing dispatched, PV curtailed
///   1 pv_load     PV serves the load, excess curtailed
///   2 pv_battery  PV serves the load, battery discharge covers the residual
///   3 pv_grid     PV serves the load, grid import covers the residual,
///                 PV surplus is exported
///   4 pv_genset   PV serves the load, genset covers the residual
///   5 charge      PV serves the load, PV surplus charges the battery and the
///                 grid (when up) covers residual demand plus remaining
///                 charging headroom
///
/// Continuous action [-1,1]^3 -> (battery power, genset fraction, grid
/// exchange): a0 > 0 discharges / a0 < 0 charges at |a0| * rate limit,
/// a1 maps affinely onto [0, genset capacity], a2 > 0 imports / a2 < 0
/// exports at |a2| * grid limit. Infeasible combinations are clamped to
/// feasibility in the order battery, then genset, then grid: surplus cuts
/// discharge, then genset, then imports before curtailing PV; a deficit
/// drops exports, then charging, and whatever remains is unmet demand.
class MicrogridEnv : public Env {
 public:
  MicrogridEnv(const EnvConfig& config, Series series)
      : params_(config.microgrid),
        action_mode_(config.action_mode),
        horizon_(config.horizon),
        phase_(config.phase),
        series_(std::move(series)),
        rng_(config.seed) {
    config.validate();
    if (series_.size() == 0) throw ConfigError("microgrid: empty series slice");
    if (params_.battery_efficiency <= 0.0 || params_.battery_efficiency > 1.0) {
      throw ConfigError("microgrid: battery efficiency must be in (0,1]");
    }
    if (action_mode_ == ActionMode::discrete) {
      space_ = ActionSpace::discrete(kNumDiscreteActions);
    } else {
      space_ = ActionSpace::continuous({-1.0, -1.0, -1.0}, {1.0, 1.0, 1.0});
    }
  }

  const ActionSpace& action_space() const override { return space_; }
  int observation_size() const override { return 6; }
  int horizon() const override { return horizon_; }
  Phase phase() const override { return phase_; }

  Observation reset(std::uint64_t episode_seed) override {
    PhaseAccessLog::record(phase_);
    rng_.set_state(episode_seed);
    cursor_ = 0;
    step_count_ = 0;
    done_ = false;
    soc_ = params_.initial_soc_frac * params_.battery_capacity_kwh;
    grid_up_ = !rng_.bernoulli(params_.outage_probability);
    return observe();
  }

  StepOutcome step(const Action& action) override {
    if (done_) throw ContractError("microgrid: episode already terminal");

    const double demand = series_.demand_kw[cursor_];
    const double pv = series_.solar_kw[cursor_];

    Dispatch req{};
    if (action_mode_ == ActionMode::discrete) {
      req = discrete_request(detail::require_discrete(action, kNumDiscreteActions), demand, pv);
    } else {
      req = continuous_request(detail::require_continuous(action, space_), demand, pv);
    }
    const Flows f = settle(req, demand, req.curtail_all ? 0.0 : pv);

    soc_ = std::clamp(soc_ + params_.battery_efficiency * f.charge - f.discharge, 0.0,
                      params_.battery_capacity_kwh);

    const double cost = std::max(0.0, f.genset * params_.genset_cost_per_kwh +
                                          f.import_kwh * params_.grid_buy_per_kwh -
                                          f.export_kwh * params_.grid_sell_per_kwh);
    const double penalty = params_.penalty_per_kwh * f.unmet;

    StepOutcome out;
    out.raw_reward = -(cost + penalty);
    out.info["pv_used_kwh"] = f.pv_used;
    out.info["curtailed_kwh"] = (req.curtail_all ? pv : pv - f.pv_used);
    out.info["discharge_kwh"] = f.discharge;
    out.info["charge_kwh"] = f.charge;
    out.info["genset_kwh"] = f.genset;
    out.info["import_kwh"] = f.import_kwh;
    out.info["export_kwh"] = f.export_kwh;
    out.info["served_kwh"] = f.served;
    out.info["unmet_demand_kwh"] = f.unmet;
    out.info["grid_up"] = grid_up_ ? 1.0 : 0.0;
    out.info["soc_kwh"] = soc_;

    cursor_ = (cursor_ + 1) % series_.size();
    ++step_count_;
    grid_up_ = !rng_.bernoulli(params_.outage_probability);
    done_ = step_count_ >= horizon_;
    out.terminal = done_;
    out.next_observation = observe();
    return out;
  }

  double soc_kwh() const { return soc_; }
  bool grid_up() const { return grid_up_; }

  static constexpr int kNumDiscreteActions = 6;

 private:
  struct Dispatch {
    double discharge_req = 0.0;  // kWh drawn from the battery
    double charge_req = 0.0;     // kWh pushed toward the battery (grid side)
    double genset_req = 0.0;     // kWh of genset output
    double import_req = 0.0;     // kWh bought from the main grid
    double export_req = 0.0;     // kWh sold to the main grid
    bool curtail_all = false;    // idle: PV not even offered to the load
  };

  struct Flows {
    double pv_used = 0.0;
    double discharge = 0.0;
    double charge = 0.0;
    double genset = 0.0;
    double import_kwh = 0.0;
    double export_kwh = 0.0;
    double served = 0.0;
    double unmet = 0.0;
  };

  double max_charge_kwh() const {
    return std::min(params_.battery_max_charge_kw,
                    (params_.battery_capacity_kwh - soc_) / params_.battery_efficiency);
  }
  double max_discharge_kwh() const { return std::min(params_.battery_max_discharge_kw, soc_); }

  Dispatch discrete_request(int a, double demand, double pv) const {
    Dispatch d;
    const double residual = std::max(0.0, demand - pv);
    const double surplus = std::max(0.0, pv - demand);
    switch (a) {
      case 0:
        d.curtail_all = true;
        break;
      case 1:
        break;
      case 2:
        d.discharge_req = std::min(residual, max_discharge_kwh());
        break;
      case 3:
        d.import_req = std::min(residual, params_.grid_max_exchange_kw);
        d.export_req = std::min(surplus, params_.grid_max_exchange_kw);
        break;
      case 4:
        d.genset_req = std::min(residual, params_.genset_capacity_kw);
        break;
      case 5: {
        d.charge_req = max_charge_kwh();
        const double need = std::max(0.0, demand + d.charge_req - pv);
        d.import_req = std::min(need, params_.grid_max_exchange_kw);
        break;
      }
      default:
        throw ContractError("microgrid: unknown discrete action");
    }
    return d;
  }

  Dispatch continuous_request(const std::vector<double>& a, double /*demand*/, double /*pv*/) const {
    Dispatch d;
    if (a[0] >= 0.0) {
      d.discharge_req = a[0] * params_.battery_max_discharge_kw;
    } else {
      d.charge_req = -a[0] * params_.battery_max_charge_kw;
    }
    d.genset_req = 0.5 * (a[1] + 1.0) * params_.genset_capacity_kw;
    if (a[2] >= 0.0) {
      d.import_req = a[2] * params_.grid_max_exchange_kw;
    } else {
      d.export_req = -a[2] * params_.grid_max_exchange_kw;
    }
    return d;
  }

  Flows settle(const Dispatch& req, double demand, double pv) const {
    Flows f;
    // physical clamps: battery, then genset, then grid
    f.discharge = std::min(req.discharge_req, max_discharge_kwh());
    f.charge = std::min(req.charge_req, max_charge_kwh());
    f.genset = std::clamp(req.genset_req, 0.0, params_.genset_capacity_kw);
    f.import_kwh = grid_up_ ? std::min(req.import_req, params_.grid_max_exchange_kw) : 0.0;
    f.export_kwh = grid_up_ ? std::min(req.export_req, params_.grid_max_exchange_kw) : 0.0;

    const double supply = pv + f.discharge + f.genset + f.import_kwh;
    const double sinks = demand + f.charge + f.export_kwh;
    if (supply >= sinks) {
      double surplus = supply - sinks;
      const double cut_d = std::min(surplus, f.discharge);
      f.discharge -= cut_d;
      surplus -= cut_d;
      const double cut_g = std::min(surplus, f.genset);
      f.genset -= cut_g;
      surplus -= cut_g;
      const double cut_m = std::min(surplus, f.import_kwh);
      f.import_kwh -= cut_m;
      surplus -= cut_m;
      f.pv_used = pv - surplus;  // leftover surplus is curtailed PV
      f.served = demand;
      f.unmet = 0.0;
    } else {
      double deficit = sinks - supply;
      const double cut_e = std::min(deficit, f.export_kwh);
      f.export_kwh -= cut_e;
      deficit -= cut_e;
      const double cut_c = std::min(deficit, f.charge);
      f.charge -= cut_c;
      deficit -= cut_c;
      f.pv_used = pv;
      f.unmet = deficit;
      f.served = demand - deficit;
    }
    return f;
  }

  Observation observe() const {
    const std::size_t abs_index = series_.offset + cursor_;
    const double day = static_cast<double>(abs_index % static_cast<std::size_t>(params_.steps_per_day)) /
                       static_cast<double>(params_.steps_per_day);
    return {soc_ / params_.battery_capacity_kwh,
            series_.demand_kw[cursor_],
            series_.solar_kw[cursor_],
            grid_up_ ? 1.0 : 0.0,
            std::sin(2.0 * M_PI * day),
            std::cos(2.0 * M_PI * day)};
  }

  MicrogridParams params_;
  ActionMode action_mode_;
  int horizon_;
  Phase phase_;
  Series series_;
  ActionSpace space_;
  Rng rng_;

  std::size_t cursor_ = 0;
  int step_count_ = 0;
  bool done_ = true;
  double soc_ = 0.0;
  bool grid_up_ = true;
};

}  // namespace rlens
