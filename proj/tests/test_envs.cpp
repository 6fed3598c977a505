#include "rlens/envs.hpp"

#include <gtest/gtest.h>

#include "rlens/rng.hpp"

using namespace rlens;

namespace {

Series constant_series(double demand, double solar, std::size_t n = 8) {
  Series s;
  s.demand_kw.assign(n, demand);
  s.solar_kw.assign(n, solar);
  return s;
}

EnvConfig microgrid_config(ActionMode mode = ActionMode::discrete) {
  EnvConfig cfg;
  cfg.env_id = EnvId::microgrid;
  cfg.action_mode = mode;
  cfg.horizon = 8;
  cfg.seed = 1;
  cfg.microgrid.outage_probability = 0.0;
  return cfg;
}

}  // namespace

TEST(Microgrid, IdleOnDeadGridIsFree) {
  auto cfg = microgrid_config();
  MicrogridEnv env(cfg, constant_series(0.0, 0.0));
  env.reset(7);
  const auto out = env.step(Action{0});
  EXPECT_DOUBLE_EQ(out.raw_reward, 0.0);
}

TEST(Microgrid, UnmetDemandCostsPenaltyRate) {
  // demand 10 kW for one hour, grid down, everything else off
  auto cfg = microgrid_config();
  cfg.microgrid.outage_probability = 1.0;
  MicrogridEnv env(cfg, constant_series(10.0, 0.0));
  env.reset(7);
  const auto out = env.step(Action{0});
  EXPECT_DOUBLE_EQ(out.raw_reward, -(cfg.microgrid.penalty_per_kwh * 10.0));
  EXPECT_DOUBLE_EQ(out.info.at("unmet_demand_kwh"), 10.0);
}

TEST(Microgrid, GridImportAtBuyPrice) {
  // demand 5 kW served entirely by grid import at 0.2 $/kWh -> -1.0
  auto cfg = microgrid_config();
  MicrogridEnv env(cfg, constant_series(5.0, 0.0));
  env.reset(7);
  const auto out = env.step(Action{3});
  EXPECT_DOUBLE_EQ(out.raw_reward, -1.0);
  EXPECT_DOUBLE_EQ(out.info.at("import_kwh"), 5.0);
  EXPECT_DOUBLE_EQ(out.info.at("unmet_demand_kwh"), 0.0);
}

TEST(Microgrid, GensetServesOnlyResidual) {
  auto cfg = microgrid_config();
  MicrogridEnv env(cfg, constant_series(6.0, 2.0));
  env.reset(7);
  const auto out = env.step(Action{4});
  EXPECT_DOUBLE_EQ(out.info.at("genset_kwh"), 4.0);
  EXPECT_DOUBLE_EQ(out.raw_reward, -(4.0 * cfg.microgrid.genset_cost_per_kwh));
}

TEST(Microgrid, BatteryDischargeCoversResidual) {
  auto cfg = microgrid_config();
  MicrogridEnv env(cfg, constant_series(7.0, 3.0));
  env.reset(7);
  const double soc0 = env.soc_kwh();
  const auto out = env.step(Action{2});
  EXPECT_DOUBLE_EQ(out.info.at("discharge_kwh"), 4.0);
  EXPECT_DOUBLE_EQ(out.raw_reward, 0.0);  // battery energy is free at dispatch time
  EXPECT_DOUBLE_EQ(env.soc_kwh(), soc0 - 4.0);
}

TEST(Microgrid, ChargeActionStoresWithEfficiencyLoss) {
  auto cfg = microgrid_config();
  cfg.microgrid.initial_soc_frac = 0.0;
  MicrogridEnv env(cfg, constant_series(0.0, 4.0));
  env.reset(7);
  const auto out = env.step(Action{5});
  // surplus PV (4) plus import up to the 10 kW charge limit
  EXPECT_DOUBLE_EQ(out.info.at("charge_kwh"), 10.0);
  EXPECT_DOUBLE_EQ(out.info.at("import_kwh"), 6.0);
  EXPECT_DOUBLE_EQ(env.soc_kwh(), 0.9 * 10.0);
}

TEST(Microgrid, RewardNeverPositiveAndEnergyBalances) {
  Rng rng(42);
  for (ActionMode mode : {ActionMode::discrete, ActionMode::continuous}) {
    auto cfg = microgrid_config(mode);
    cfg.horizon = 200;
    cfg.microgrid.outage_probability = 0.3;
    Series series;
    for (int i = 0; i < 200; ++i) {
      series.demand_kw.push_back(rng.uniform(0.0, 12.0));
      series.solar_kw.push_back(rng.uniform(0.0, 9.0));
    }
    MicrogridEnv env(cfg, series);
    env.reset(33);
    for (int t = 0; t < 200; ++t) {
      Action a;
      if (mode == ActionMode::discrete) {
        a = rng.uniform_int(0, MicrogridEnv::kNumDiscreteActions - 1);
      } else {
        a = std::vector<double>{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
      }
      const auto out = env.step(a);
      EXPECT_LE(out.raw_reward, 0.0);
      const auto& info = out.info;
      const double residual = info.at("pv_used_kwh") + info.at("discharge_kwh") +
                              info.at("genset_kwh") + info.at("import_kwh") -
                              info.at("served_kwh") - info.at("charge_kwh") -
                              info.at("export_kwh");
      EXPECT_NEAR(residual, 0.0, 1e-9);
      EXPECT_GE(env.soc_kwh(), 0.0);
      EXPECT_LE(env.soc_kwh(), cfg.microgrid.battery_capacity_kwh);
      if (out.terminal) break;
    }
  }
}

TEST(Microgrid, OutageZeroesGridFlows) {
  auto cfg = microgrid_config();
  cfg.microgrid.outage_probability = 1.0;
  MicrogridEnv env(cfg, constant_series(5.0, 0.0));
  env.reset(7);
  const auto out = env.step(Action{3});
  EXPECT_DOUBLE_EQ(out.info.at("import_kwh"), 0.0);
  EXPECT_DOUBLE_EQ(out.info.at("unmet_demand_kwh"), 5.0);
}

TEST(Microgrid, DeterministicTrajectories) {
  auto cfg = microgrid_config(ActionMode::continuous);
  cfg.microgrid.outage_probability = 0.2;
  Rng action_rng(5);
  std::vector<Action> actions;
  for (int t = 0; t < 8; ++t) {
    actions.push_back(std::vector<double>{action_rng.uniform(-1, 1), action_rng.uniform(-1, 1),
                                          action_rng.uniform(-1, 1)});
  }
  std::vector<double> rewards[2];
  for (int run = 0; run < 2; ++run) {
    MicrogridEnv env(cfg, constant_series(6.0, 2.0));
    env.reset(99);
    for (const auto& a : actions) rewards[run].push_back(env.step(a).raw_reward);
  }
  EXPECT_EQ(rewards[0], rewards[1]);
}

TEST(Microgrid, StepAfterTerminalRejected) {
  auto cfg = microgrid_config();
  cfg.horizon = 1;
  MicrogridEnv env(cfg, constant_series(1.0, 0.0));
  env.reset(7);
  EXPECT_TRUE(env.step(Action{1}).terminal);
  EXPECT_THROW(env.step(Action{1}), ContractError);
}

TEST(Microgrid, OutOfRangeActionsRejected) {
  auto cfg = microgrid_config();
  MicrogridEnv env(cfg, constant_series(1.0, 0.0));
  env.reset(7);
  EXPECT_THROW(env.step(Action{17}), ContractError);
  EXPECT_THROW(env.step(Action{std::vector<double>{0.0, 0.0, 0.0}}), ContractError);

  auto ccfg = microgrid_config(ActionMode::continuous);
  MicrogridEnv cenv(ccfg, constant_series(1.0, 0.0));
  cenv.reset(7);
  EXPECT_THROW(cenv.step(Action{std::vector<double>{2.0, 0.0, 0.0}}), ContractError);
}

TEST(Plant, PerfectTrackingAtReference) {
  EnvConfig cfg;
  cfg.env_id = EnvId::safety_plant;
  cfg.action_mode = ActionMode::continuous;
  cfg.horizon = 10;
  cfg.plant.disturbance_bound = 0.0;
  cfg.plant.initial_state_bound = 0.0;
  PlantEnv env(cfg);
  env.reset(3);
  const auto out = env.step(Action{std::vector<double>{0.0}});
  EXPECT_DOUBLE_EQ(out.raw_reward, 1.0);
  EXPECT_FALSE(out.terminal);
}

TEST(Plant, LimitViolationTerminatesWithMinimumReward) {
  EnvConfig cfg;
  cfg.env_id = EnvId::safety_plant;
  cfg.action_mode = ActionMode::continuous;
  cfg.horizon = 1000;
  cfg.plant.disturbance_bound = 0.0;
  cfg.plant.initial_state_bound = 0.0;
  PlantEnv env(cfg);
  env.reset(3);
  // saturate the force until the velocity state crosses the limit
  StepOutcome out;
  int steps = 0;
  do {
    out = env.step(Action{std::vector<double>{1.0}});
    ++steps;
  } while (!out.terminal && steps < 1000);
  EXPECT_TRUE(out.terminal);
  EXPECT_DOUBLE_EQ(out.raw_reward, cfg.plant.violation_reward);
  EXPECT_DOUBLE_EQ(out.info.at("limit_violation"), 1.0);
  EXPECT_THROW(env.step(Action{std::vector<double>{0.0}}), ContractError);
}

TEST(Plant, RewardStaysInUnitIntervalBeforeViolation) {
  EnvConfig cfg;
  cfg.env_id = EnvId::safety_plant;
  cfg.action_mode = ActionMode::discrete;
  cfg.horizon = 500;
  PlantEnv env(cfg);
  Rng rng(77);
  env.reset(11);
  for (int t = 0; t < 500; ++t) {
    const auto out = env.step(Action{rng.uniform_int(0, PlantEnv::kNumDiscreteActions - 1)});
    if (out.info.at("limit_violation") == 1.0) {
      EXPECT_TRUE(out.terminal);
      break;
    }
    EXPECT_GE(out.raw_reward, 0.0);
    EXPECT_LE(out.raw_reward, 1.0);
    if (out.terminal) break;
  }
}

TEST(Plant, FixedSeedFixedActionsIdenticalTrajectories) {
  EnvConfig cfg;
  cfg.env_id = EnvId::safety_plant;
  cfg.action_mode = ActionMode::discrete;
  cfg.horizon = 50;
  std::vector<double> traj[2];
  for (int run = 0; run < 2; ++run) {
    PlantEnv env(cfg);
    auto obs = env.reset(123);
    traj[run].insert(traj[run].end(), obs.begin(), obs.end());
    for (int t = 0; t < 50; ++t) {
      const auto out = env.step(Action{t % PlantEnv::kNumDiscreteActions});
      traj[run].push_back(out.raw_reward);
      traj[run].insert(traj[run].end(), out.next_observation.begin(), out.next_observation.end());
      if (out.terminal) break;
    }
  }
  EXPECT_EQ(traj[0], traj[1]);
}

TEST(MakeEnv, ResetIsDeterministicPerConfig) {
  EnvConfig cfg;
  cfg.env_id = EnvId::microgrid;
  cfg.horizon = 4;
  cfg.seed = 42;
  auto env1 = make_env(cfg);
  auto env2 = make_env(cfg);
  EXPECT_EQ(env1->reset(cfg.seed), env2->reset(cfg.seed));
}

TEST(MakeEnv, PhaseSlicesComeFromTheRightRanges) {
  EnvConfig cfg;
  cfg.env_id = EnvId::microgrid;
  cfg.horizon = 4;
  cfg.phase = Phase::validation;
  auto env = make_env(cfg);
  const auto obs_val = env->reset(1);

  // validation observations are functions of the validation slice only:
  // the first validation observation differs from the train one because the
  // series cursor starts at the validation offset
  cfg.phase = Phase::train;
  auto train_env = make_env(cfg);
  const auto obs_train = train_env->reset(1);
  EXPECT_NE(obs_val[1], obs_train[1]);  // demand at different cursor positions
}

TEST(MakeEnv, InvalidConfigRejected) {
  EnvConfig cfg;
  cfg.horizon = 0;
  EXPECT_THROW(make_env(cfg), ConfigError);
  EXPECT_THROW(env_id_from_string("toaster"), ConfigError);
}

TEST(PhaseAccess, LogCountsResets) {
  PhaseAccessLog::reset();
  EnvConfig cfg;
  cfg.env_id = EnvId::safety_plant;
  cfg.phase = Phase::test;
  auto env = make_env(cfg);
  EXPECT_EQ(PhaseAccessLog::count(Phase::test), 0);
  env->reset(1);
  EXPECT_EQ(PhaseAccessLog::count(Phase::test), 1);
  EXPECT_EQ(PhaseAccessLog::count(Phase::train), 0);
  PhaseAccessLog::reset();
}
