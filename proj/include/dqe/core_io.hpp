#pragma once

#include <iosfwd>

#include <json.hpp>

#include "dqe/core_model.hpp"

namespace dqe {

/// Scenario file: {schedule: {type, ...}, k, W0, Y0, g, t_end, dt}.
/// Schedule types: constant{M0}, linear{V0}, exponential{M0, q},
/// output-power{alpha}, tabulated{t: [...], M: [...]}. dt defaults to k/100.
struct ScenarioConfig {
  MoneySupplySchedule schedule = ConstantSupply{1.0};
  ScenarioParams params;
  double t_end = 100.0;
  double dt = 0.01;
};

/// InputError messages name the offending field, e.g. "schedule.M0: missing".
ScenarioConfig parse_scenario_config(const nlohmann::json& doc);
nlohmann::ordered_json schedule_to_json(const MoneySupplySchedule& schedule);
nlohmann::ordered_json scenario_to_json(const ScenarioConfig& config);

/// Header `t,M,W,P,Y,c,v`, 12 significant digits.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);

nlohmann::ordered_json regime_to_json(const LongRunRegime& regime);

}  // namespace dqe
