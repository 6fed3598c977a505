#pragma once

#include <memory>

#include "rlens/env.hpp"
#include "rlens/microgrid.hpp"
#include "rlens/plant.hpp"
#include "rlens/timeseries.hpp"

namespace rlens {

namespace detail {

inline bool split_unset(const PhaseSplit& s) {
  return s.train.length() == 0 && s.validation.length() == 0 && s.test.length() == 0;
}

}  // namespace detail

/// Loads (or synthesizes) the demand/solar series and returns the slice for
/// `config.phase`. An env built from it can only ever observe its own phase.
inline Series load_phase_series(const EnvConfig& config) {
  std::vector<double> demand;
  std::vector<double> solar;
  PhaseSplit split = config.phase_split;
  if (config.timeseries_path.empty()) {
    synthetic_timeseries(demand, solar);
    if (detail::split_unset(split)) split = default_phase_split(demand.size());
    std::ostringstream csv;
    write_timeseries_csv(csv, demand, solar);
    std::istringstream in(csv.str());
    PhasedSeries phased = ingest_timeseries_stream(in, split, "<builtin>");
    switch (config.phase) {
      case Phase::train: return phased.train;
      case Phase::validation: return phased.validation;
      case Phase::test: return phased.test;
    }
  }
  if (detail::split_unset(split)) {
    std::ifstream probe(config.timeseries_path);
    if (!probe) throw IoError("cannot open time series file: " + config.timeseries_path);
    std::string line;
    std::size_t rows = 0;
    std::getline(probe, line);
    while (std::getline(probe, line)) {
      if (!line.empty()) ++rows;
    }
    split = default_phase_split(rows);
  }
  PhasedSeries phased = ingest_timeseries(config.timeseries_path, split);
  switch (config.phase) {
    case Phase::train: return phased.train;
    case Phase::validation: return phased.validation;
    case Phase::test: return phased.test;
  }
  throw ConfigError("unknown phase");
}

inline std::unique_ptr<Env> make_env(const EnvConfig& config) {
  config.validate();
  switch (config.env_id) {
    case EnvId::microgrid:
      return std::make_unique<MicrogridEnv>(config, load_phase_series(config));
    case EnvId::safety_plant:
      return std::make_unique<PlantEnv>(config);
  }
  throw ConfigError("unknown env id");
}

}  // namespace rlens
