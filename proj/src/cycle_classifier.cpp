#include "dqe/cycle_classifier.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdlib>

namespace dqe {

namespace {

// Absorbs decimal rounding in percentage-point differences (e.g. 19.9 - 16.8).
constexpr double kThresholdSlack = 1e-9;

struct RowSpec {
  TriangleRow row;
  std::optional<Direction> dg;  // set only where the row is split by output direction
};

constexpr std::array<RowSpec, 8> kTriangle{{
    {{Direction::flat, ElasticityClass::eq_minus_one, BehaviorLabel::golden_growth}, Direction::up},
    {{Direction::flat, ElasticityClass::eq_minus_one, BehaviorLabel::stagflation}, Direction::down},
    {{Direction::up, ElasticityClass::below_minus_one, BehaviorLabel::greater_inflation}, std::nullopt},
    {{Direction::up, ElasticityClass::between_minus_one_and_zero, BehaviorLabel::greater_output}, std::nullopt},
    {{Direction::down, ElasticityClass::below_minus_one, BehaviorLabel::less_output}, std::nullopt},
    {{Direction::down, ElasticityClass::between_minus_one_and_zero, BehaviorLabel::less_inflation}, std::nullopt},
    {{Direction::up, ElasticityClass::positive, BehaviorLabel::double_rise}, std::nullopt},
    {{Direction::down, ElasticityClass::positive, BehaviorLabel::double_drop}, std::nullopt},
}};

BehaviorLabel seesaw_label(Direction driving, ElasticityClass cls) {
  for (const auto& spec : kTriangle)
    if (spec.row.q_direction == driving && spec.row.elasticity == cls) return spec.row.behavior;
  throw NoMatchingRowError("no seesaw behaviour for this direction/elasticity pair");
}

int sign_outside(double x, double eps) { return x > eps ? 1 : (x < -eps ? -1 : 0); }

Direction direction_of(int s) { return s > 0 ? Direction::up : (s < 0 ? Direction::down : Direction::flat); }

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  std::replace(s.begin(), s.end(), '_', '-');
  return s;
}

std::optional<double> as_number(const std::string& s) {
  if (s.empty()) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

std::string to_string(BehaviorLabel label) {
  switch (label) {
    case BehaviorLabel::golden_growth: return "golden_growth";
    case BehaviorLabel::stagflation: return "stagflation";
    case BehaviorLabel::greater_inflation: return "GI";
    case BehaviorLabel::greater_output: return "GO";
    case BehaviorLabel::less_inflation: return "LI";
    case BehaviorLabel::less_output: return "LO";
    case BehaviorLabel::double_drop: return "DD";
    case BehaviorLabel::double_rise: return "DR";
  }
  return "unknown";
}

std::string short_name(BehaviorLabel label) {
  switch (label) {
    case BehaviorLabel::golden_growth: return "golden-growth";
    case BehaviorLabel::stagflation: return "stagflation";
    default: return to_string(label);
  }
}

std::string to_string(Direction direction) {
  switch (direction) {
    case Direction::up: return "up";
    case Direction::down: return "down";
    case Direction::flat: return "flat";
  }
  return "unknown";
}

std::string to_string(CycleClass cycle_class) {
  switch (cycle_class) {
    case CycleClass::anc: return "ANC";
    case CycleClass::rnc: return "RNC";
    case CycleClass::sdc: return "SDC";
  }
  return "unknown";
}

std::string to_string(ElasticityClass elasticity_class) {
  switch (elasticity_class) {
    case ElasticityClass::eq_minus_one: return "eq_minus_one";
    case ElasticityClass::below_minus_one: return "below_minus_one";
    case ElasticityClass::between_minus_one_and_zero: return "between_minus_one_and_zero";
    case ElasticityClass::positive: return "positive";
  }
  return "unknown";
}

BehaviorLabel parse_behavior(const std::string& text) {
  const auto s = lower(text);
  if (s == "golden-growth" || s == "golden" || s == "goldengrowth") return BehaviorLabel::golden_growth;
  if (s == "stagflation") return BehaviorLabel::stagflation;
  if (s == "gi" || s == "greater-inflation") return BehaviorLabel::greater_inflation;
  if (s == "go" || s == "greater-output") return BehaviorLabel::greater_output;
  if (s == "li" || s == "less-inflation") return BehaviorLabel::less_inflation;
  if (s == "lo" || s == "less-output") return BehaviorLabel::less_output;
  if (s == "dd" || s == "double-drop") return BehaviorLabel::double_drop;
  if (s == "dr" || s == "double-rise") return BehaviorLabel::double_rise;
  throw InputError("unknown behaviour '" + text + "'");
}

Direction parse_direction(const std::string& text) {
  const auto s = lower(text);
  if (s == "up" || s == "+") return Direction::up;
  if (s == "down" || s == "-") return Direction::down;
  if (s == "flat" || s == "0" || s == "constant") return Direction::flat;
  throw InputError("unknown direction '" + text + "' (expected up, down or flat)");
}

ElasticityClass parse_elasticity_class(const std::string& text) {
  const auto s = lower(text);
  if (s == "eq-minus-one") return ElasticityClass::eq_minus_one;
  if (s == "below-minus-one") return ElasticityClass::below_minus_one;
  if (s == "between-minus-one-and-zero") return ElasticityClass::between_minus_one_and_zero;
  if (s == "positive") return ElasticityClass::positive;
  throw InputError("unknown elasticity class '" + text + "'");
}

void Thresholds::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw InputError(std::string(name) + ": must be > 0");
  };
  positive(evident_up, "evident_up");
  positive(evident_down, "evident_down");
  positive(sensitivity_ratio, "sensitivity_ratio");
  positive(sensitive_trigger, "sensitive_trigger");
  positive(slope_delta, "slope_delta");
  if (!(tie_eps >= 0.0) || !std::isfinite(tie_eps)) throw InputError("tie_eps: must be >= 0");
  if (max_buffer_steps == 0) throw InputError("max_buffer_steps: must be > 0");
}

double elasticity(const MacroObservation& prev, const MacroObservation& next) {
  const double dg = next.g - prev.g;
  if (dg == 0.0)
    throw InputError("elasticity undefined between " + prev.period + " and " + next.period +
                     ": output growth unchanged");
  return (next.c - prev.c) / dg;
}

ElasticityClass elasticity_class_of(double slope, double slope_delta) {
  if (slope > 0.0) return ElasticityClass::positive;
  if (std::abs(slope + 1.0) <= slope_delta) return ElasticityClass::eq_minus_one;
  if (slope < -1.0) return ElasticityClass::below_minus_one;
  return ElasticityClass::between_minus_one_and_zero;
}

MigrationStep classify_step(const MacroObservation& prev, const MacroObservation& next, const Thresholds& th) {
  MigrationStep step;
  step.from = prev.period;
  step.to = next.period;
  step.dq = next.q - prev.q;
  step.dg = next.g - prev.g;
  step.dc = next.c - prev.c;
  if (step.dg != 0.0) step.elasticity = step.dc / step.dg;

  const double eps = th.tie_eps;
  step.q_direction = direction_of(sign_outside(step.dq, eps));

  int sg = sign_outside(step.dg, eps);
  int sc = sign_outside(step.dc, eps);
  if (sg == 0 && sc == 0) {
    step.degenerate = true;
    return step;
  }
  // A flat delta follows the other one, so a stalled inflation rate does not
  // interrupt a run of double drops.
  if (sg == 0) sg = sc;
  if (sc == 0) sc = sg;

  if (sg == sc) {
    step.label = sg > 0 ? BehaviorLabel::double_rise : BehaviorLabel::double_drop;
    step.cycle_class = CycleClass::sdc;
    step.elasticity_class = ElasticityClass::positive;
    step.driving_direction = direction_of(sg);
    step.coarse = sg > 0 ? "DR" : "DD";
    return step;
  }

  const double slope = step.dc / step.dg;
  if (step.q_direction == Direction::flat && std::abs(slope + 1.0) <= th.slope_delta) {
    step.label = step.dg > 0.0 ? BehaviorLabel::golden_growth : BehaviorLabel::stagflation;
    step.cycle_class = CycleClass::anc;
    step.elasticity_class = ElasticityClass::eq_minus_one;
    step.driving_direction = Direction::flat;
    step.coarse = "NC";
    return step;
  }

  step.elasticity_class = slope < -1.0 ? ElasticityClass::below_minus_one : ElasticityClass::between_minus_one_and_zero;
  if (step.q_direction == Direction::flat)
    step.driving_direction = step.dg + step.dc > 0.0 ? Direction::up : Direction::down;
  else
    step.driving_direction = step.q_direction;
  step.label = seesaw_label(step.driving_direction, *step.elasticity_class);
  step.cycle_class = CycleClass::rnc;
  step.coarse = "RNC";
  return step;
}

Spectrum classify_series(const MacroSeries& series, const Thresholds& th) {
  th.validate();
  if (series.size() < 2) throw InputError("classify_series: at least 2 observations required");

  bool numeric = true;
  for (const auto& obs : series) {
    if (!std::isfinite(obs.q) || !std::isfinite(obs.g) || !std::isfinite(obs.c))
      throw InputError("period " + obs.period + ": rates must be finite");
    if (!as_number(obs.period)) numeric = false;
  }
  for (std::size_t i = 1; i < series.size(); ++i) {
    const auto& a = series[i - 1].period;
    const auto& b = series[i].period;
    const bool increasing = numeric ? (*as_number(b) > *as_number(a)) : (b > a);
    if (!increasing) throw InputError("periods must be strictly increasing: '" + a + "' then '" + b + "'");
  }

  Spectrum out;
  std::string carried = "flat";
  bool any_degenerate = false;
  for (std::size_t i = 1; i < series.size(); ++i) {
    auto step = classify_step(series[i - 1], series[i], th);
    if (step.degenerate) {
      step.coarse = carried;
      any_degenerate = true;
    } else {
      carried = step.coarse;
    }
    out.steps.push_back(std::move(step));
  }

  out.periods.push_back({series.front().period, out.steps.front().coarse});
  for (std::size_t i = 0; i < out.steps.size(); ++i) out.periods.push_back({series[i + 1].period, out.steps[i].coarse});

  for (const auto& step : out.steps) {
    if (!out.segments.empty() && out.segments.back().tag == step.coarse)
      out.segments.back().to = step.to;
    else
      out.segments.push_back({step.from, step.to, step.coarse});
  }

  if (any_degenerate) out.notes.push_back("degenerate-flat: steps with |dg| and |dc| within tie_eps carry no label");
  return out;
}

TriangleRow resolve_triangle(const TriangleQuery& known) {
  const int count = static_cast<int>(known.q_direction.has_value()) + static_cast<int>(known.elasticity.has_value()) +
                    static_cast<int>(known.behavior.has_value());
  if (count != 2) throw InputError("resolve_triangle needs exactly two of: money-growth direction, elasticity, behaviour");

  std::vector<const RowSpec*> matches;
  for (const auto& spec : kTriangle) {
    if (known.q_direction && spec.row.q_direction != *known.q_direction) continue;
    if (known.elasticity && spec.row.elasticity != *known.elasticity) continue;
    if (known.behavior && spec.row.behavior != *known.behavior) continue;
    matches.push_back(&spec);
  }
  if (matches.size() > 1 && known.dg_direction) {
    std::erase_if(matches, [&](const RowSpec* s) { return s->dg && *s->dg != *known.dg_direction; });
  }
  if (matches.empty()) {
    std::string what = "no matching row for";
    if (known.q_direction) what += " q " + to_string(*known.q_direction);
    if (known.elasticity) what += " elasticity " + to_string(*known.elasticity);
    if (known.behavior) what += " behaviour " + short_name(*known.behavior);
    throw NoMatchingRowError(what);
  }
  if (matches.size() > 1)
    throw NoMatchingRowError("ambiguous: golden growth and stagflation share this row; give the output direction");
  return matches.front()->row;
}

std::string to_string(SensitivityFlag flag) {
  switch (flag) {
    case SensitivityFlag::sensitive: return "sensitive";
    case SensitivityFlag::insensitive: return "insensitive";
    case SensitivityFlag::unknown: return "unknown";
  }
  return "unknown";
}

Sensitivity sensitivity_index(const MacroObservation& obs, const Thresholds& th) {
  Sensitivity s;
  if (!(obs.g > 0.0)) return s;
  s.gap = obs.q / obs.g - 1.0;
  s.flag = *s.gap < th.sensitivity_ratio ? SensitivityFlag::sensitive : SensitivityFlag::insensitive;
  return s;
}

std::string to_string(MoneyChange change) {
  switch (change) {
    case MoneyChange::evident_increase: return "evident_increase";
    case MoneyChange::evident_decrease: return "evident_decrease";
    case MoneyChange::slight: return "slight";
    case MoneyChange::none: return "none";
  }
  return "unknown";
}

MoneyChange classify_money_change(double dq, SensitivityFlag sensitivity, const Thresholds& th) {
  if (sensitivity == SensitivityFlag::sensitive) {
    if (dq >= th.sensitive_trigger - kThresholdSlack) return MoneyChange::evident_increase;
    if (dq <= -th.sensitive_trigger + kThresholdSlack) return MoneyChange::evident_decrease;
    if (std::abs(dq) > th.tie_eps) return MoneyChange::slight;
    return MoneyChange::none;
  }
  if (dq >= th.evident_up - kThresholdSlack) return MoneyChange::evident_increase;
  if (dq <= -th.evident_down + kThresholdSlack) return MoneyChange::evident_decrease;
  return MoneyChange::none;
}

}  // namespace dqe
