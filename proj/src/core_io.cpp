#include "dqe/core_io.hpp"

#include <cstdio>
#include <ostream>

namespace dqe {

namespace {

using nlohmann::json;

double number_field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.contains(key)) throw InputError(path + key + ": missing");
  const auto& v = obj.at(key);
  if (!v.is_number()) throw InputError(path + key + ": must be a number");
  return v.get<double>();
}

std::vector<double> number_array(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.contains(key)) throw InputError(path + key + ": missing");
  const auto& v = obj.at(key);
  if (!v.is_array()) throw InputError(path + key + ": must be an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw InputError(path + key + ": must be an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

void put_number(std::ostream& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  out << buf;
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

ScenarioConfig parse_scenario_config(const json& doc) {
  if (!doc.is_object()) throw InputError("config: must be a JSON object");
  if (!doc.contains("schedule") || !doc["schedule"].is_object()) throw InputError("schedule: missing or not an object");
  const auto& s = doc["schedule"];
  if (!s.contains("type") || !s["type"].is_string()) throw InputError("schedule.type: missing");
  const auto type = s["type"].get<std::string>();

  ScenarioConfig cfg;
  const std::string sp = "schedule.";
  if (type == "constant")
    cfg.schedule = ConstantSupply{number_field(s, "M0", sp)};
  else if (type == "linear")
    cfg.schedule = LinearSupply{number_field(s, "V0", sp)};
  else if (type == "exponential")
    cfg.schedule = ExponentialSupply{number_field(s, "M0", sp), number_field(s, "q", sp)};
  else if (type == "output-power")
    cfg.schedule = OutputPowerSupply{number_field(s, "alpha", sp)};
  else if (type == "tabulated")
    cfg.schedule = TabulatedSupply{number_array(s, "t", sp), number_array(s, "M", sp)};
  else
    throw InputError("schedule.type: unknown schedule '" + type + "'");

  cfg.params.k = number_field(doc, "k", "");
  cfg.params.w0 = number_field(doc, "W0", "");
  cfg.params.y0 = number_field(doc, "Y0", "");
  cfg.params.g = doc.contains("g") ? number_field(doc, "g", "") : 0.0;
  cfg.t_end = number_field(doc, "t_end", "");
  cfg.dt = doc.contains("dt") ? number_field(doc, "dt", "") : cfg.params.k / 100.0;

  validate(cfg.schedule);
  validate(cfg.params);
  return cfg;
}

nlohmann::ordered_json schedule_to_json(const MoneySupplySchedule& schedule) {
  nlohmann::ordered_json j;
  j["type"] = schedule_name(schedule);
  if (const auto* c = std::get_if<ConstantSupply>(&schedule)) {
    j["M0"] = c->m0;
  } else if (const auto* l = std::get_if<LinearSupply>(&schedule)) {
    j["V0"] = l->v0;
  } else if (const auto* e = std::get_if<ExponentialSupply>(&schedule)) {
    j["M0"] = e->m0;
    j["q"] = e->q;
  } else if (const auto* p = std::get_if<OutputPowerSupply>(&schedule)) {
    j["alpha"] = p->alpha;
  } else if (const auto* t = std::get_if<TabulatedSupply>(&schedule)) {
    j["t"] = t->times;
    j["M"] = t->values;
  }
  return j;
}

nlohmann::ordered_json scenario_to_json(const ScenarioConfig& config) {
  nlohmann::ordered_json j;
  j["schedule"] = schedule_to_json(config.schedule);
  j["k"] = config.params.k;
  j["W0"] = config.params.w0;
  j["Y0"] = config.params.y0;
  j["g"] = config.params.g;
  j["t_end"] = config.t_end;
  j["dt"] = config.dt;
  return j;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
  out << "t,M,W,P,Y,c,v\n";
  for (const auto& s : trajectory.samples()) {
    const double row[] = {s.t, s.m, s.w, s.p, s.y, s.c, s.v};
    for (std::size_t i = 0; i < 7; ++i) {
      if (i) out << ',';
      put_number(out, row[i]);
    }
    out << '\n';
  }
}

nlohmann::ordered_json regime_to_json(const LongRunRegime& regime) {
  nlohmann::ordered_json j;
  j["branch"] = to_string(regime.branch);
  j["c_inf"] = optional_number(regime.c_inf);
  j["v_inf"] = optional_number(regime.v_inf);
  j["sign"] = regime.sign ? json(to_string(*regime.sign)) : json(nullptr);
  return j;
}

}  // namespace dqe
