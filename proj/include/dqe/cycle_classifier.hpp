#pragma once

// Business-cycle behaviours as migrations between annual states in the
// (output growth g, inflation c) plane. On the balanced line c = q - g a
// migration has slope -1; money-growth changes shift the line and produce
// the other six behaviours.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "dqe/errors.hpp"

namespace dqe {

/// One annual state, all rates in percent per year.
struct MacroObservation {
  std::string period;
  double q = 0.0;  // money growth
  double g = 0.0;  // real output growth
  double c = 0.0;  // inflation
};

using MacroSeries = std::vector<MacroObservation>;

enum class BehaviorLabel {
  golden_growth,
  stagflation,
  greater_inflation,  // GI
  greater_output,     // GO
  less_inflation,     // LI
  less_output,        // LO
  double_drop,        // DD
  double_rise,        // DR
};

enum class Direction { up, down, flat };
enum class CycleClass { anc, rnc, sdc };
enum class ElasticityClass { eq_minus_one, below_minus_one, between_minus_one_and_zero, positive };

std::string to_string(BehaviorLabel label);
std::string short_name(BehaviorLabel label);  // "GI", "DD", "golden-growth", ...
std::string to_string(Direction direction);
std::string to_string(CycleClass cycle_class);
std::string to_string(ElasticityClass elasticity_class);

// Parse the names produced above (plus a few aliases); InputError otherwise.
BehaviorLabel parse_behavior(const std::string& text);
Direction parse_direction(const std::string& text);
ElasticityClass parse_elasticity_class(const std::string& text);

/// Classification thresholds. Money-change thresholds are in percentage
/// points; defaults are the values observed on China 2002-2016 and are not
/// meant to be universal.
struct Thresholds {
  double evident_up = 3.0;
  double evident_down = 4.0;
  double sensitivity_ratio = 0.35;
  double sensitive_trigger = 1.0;
  double tie_eps = 0.05;      // deltas within +-tie_eps count as flat
  double slope_delta = 0.1;   // half-width of the slope band around -1
  std::size_t max_buffer_steps = 2;

  /// tie_eps may be zero; everything else must be strictly positive.
  void validate() const;
};

struct MigrationStep {
  std::string from;
  std::string to;
  double dq = 0.0;
  double dg = 0.0;
  double dc = 0.0;
  std::optional<double> elasticity;  // dc/dg, empty when dg == 0
  Direction q_direction = Direction::flat;
  // Money-growth direction consistent with the label: the observed direction
  // for seesaw moves, up for DR, down for DD, and the balanced-line shift
  // sign(dg + dc) when money growth was observed flat but the slope is off -1.
  Direction driving_direction = Direction::flat;
  std::optional<ElasticityClass> elasticity_class;
  std::optional<BehaviorLabel> label;
  std::optional<CycleClass> cycle_class;
  bool degenerate = false;  // both |dg| and |dc| within tie_eps
  std::string coarse;       // "DR", "DD", "RNC", "NC"; degenerate steps carry the previous tag
};

/// (c1 - c0) / (g1 - g0); InputError when the output growth did not move.
double elasticity(const MacroObservation& prev, const MacroObservation& next);

ElasticityClass elasticity_class_of(double slope, double slope_delta);

MigrationStep classify_step(const MacroObservation& prev, const MacroObservation& next,
                            const Thresholds& th = {});

struct PeriodTag {
  std::string period;
  std::string tag;
};

struct CoarseSegment {
  std::string from;
  std::string to;
  std::string tag;
};

struct Spectrum {
  std::vector<MigrationStep> steps;
  std::vector<PeriodTag> periods;      // one tag per observation; the first inherits the first step's tag
  std::vector<CoarseSegment> segments; // runs of equal coarse tag over consecutive steps
  std::vector<std::string> notes;
};

/// Periods must be strictly increasing: numerically when every label parses
/// as a number, lexicographically otherwise.
Spectrum classify_series(const MacroSeries& series, const Thresholds& th = {});

struct TriangleQuery {
  std::optional<Direction> q_direction;
  std::optional<ElasticityClass> elasticity;
  std::optional<BehaviorLabel> behavior;
  std::optional<Direction> dg_direction;  // only consulted to split golden growth from stagflation
};

struct TriangleRow {
  Direction q_direction;
  ElasticityClass elasticity;
  BehaviorLabel behavior;
};

/// Thrown when the known pair matches no row (or cannot be disambiguated).
class NoMatchingRowError : public InputError {
 public:
  using InputError::InputError;
};

/// Given exactly two of {money-growth direction, elasticity class, behaviour},
/// return the full row that fixes the third.
TriangleRow resolve_triangle(const TriangleQuery& known);

enum class SensitivityFlag { sensitive, insensitive, unknown };
std::string to_string(SensitivityFlag flag);

struct Sensitivity {
  std::optional<double> gap;  // q/g - 1
  SensitivityFlag flag = SensitivityFlag::unknown;
};

Sensitivity sensitivity_index(const MacroObservation& obs, const Thresholds& th = {});

enum class MoneyChange { evident_increase, evident_decrease, slight, none };
std::string to_string(MoneyChange change);

/// Non-sensitive economies need +evident_up / -evident_down percentage points;
/// sensitive ones react to |dq| >= sensitive_trigger, and smaller non-flat
/// moves count as slight. An unknown flag is treated as non-sensitive.
MoneyChange classify_money_change(double dq, SensitivityFlag sensitivity, const Thresholds& th = {});

struct BufferEpisode {
  std::string trigger_from;  // start period of the evident-decrease run
  std::string trigger_to;
  std::vector<std::size_t> buffer_steps;  // indices into Spectrum::steps
  std::string buffer_from;
  std::string buffer_to;
  std::size_t dd_step = 0;
  std::string dd_period;  // period in which the double drop shows up
};

enum class AnomalyKind { dd_without_trigger, dd_without_buffer, buffer_too_long, unresolved_decrease };
std::string to_string(AnomalyKind kind);

struct BufferAnomaly {
  AnomalyKind kind;
  std::string from;
  std::string to;
  std::string message;
};

struct BufferReport {
  std::vector<BufferEpisode> episodes;
  std::vector<BufferAnomaly> anomalies;
};

/// Evident money-growth decreases (sensitivity judged at the start of each
/// step) are grouped into contiguous runs. Each run is followed forward to the
/// next double drop; the non-SDC steps immediately preceding that drop form
/// the buffer. No buffer is sought before a double rise.
BufferReport detect_buffer(const MacroSeries& series, const Spectrum& spectrum, const Thresholds& th = {});

}  // namespace dqe
