#include "dqe/cycle_classifier.hpp"

namespace dqe {

namespace {

bool has_label(const MigrationStep& step, BehaviorLabel label) { return step.label && *step.label == label; }

}  // namespace

std::string to_string(AnomalyKind kind) {
  switch (kind) {
    case AnomalyKind::dd_without_trigger: return "dd_without_trigger";
    case AnomalyKind::dd_without_buffer: return "dd_without_buffer";
    case AnomalyKind::buffer_too_long: return "buffer_too_long";
    case AnomalyKind::unresolved_decrease: return "unresolved_decrease";
  }
  return "unknown";
}

BufferReport detect_buffer(const MacroSeries& series, const Spectrum& spectrum, const Thresholds& th) {
  th.validate();
  const auto& steps = spectrum.steps;
  if (series.size() != steps.size() + 1) throw InputError("detect_buffer: spectrum does not belong to this series");
  const std::size_t n = steps.size();

  std::vector<MoneyChange> change(n);
  for (std::size_t i = 0; i < n; ++i)
    change[i] = classify_money_change(steps[i].dq, sensitivity_index(series[i], th).flag, th);

  BufferReport report;
  std::vector<bool> claimed(n, false);

  std::size_t i = 0;
  while (i < n) {
    if (change[i] != MoneyChange::evident_decrease) {
      ++i;
      continue;
    }
    const std::size_t first = i;
    std::size_t last = i;
    while (last + 1 < n && change[last + 1] == MoneyChange::evident_decrease) ++last;

    std::size_t buffer_start = first;
    std::optional<std::size_t> dd;
    bool interrupted = false;
    for (std::size_t k = first; k < n; ++k) {
      if (has_label(steps[k], BehaviorLabel::double_drop)) {
        dd = k;
        break;
      }
      if (has_label(steps[k], BehaviorLabel::double_rise)) {
        // A rise inside the trigger run only delays where the buffer starts.
        if (k <= last) {
          buffer_start = k + 1;
          continue;
        }
        interrupted = true;
        break;
      }
    }

    const std::string& trig_from = steps[first].from;
    const std::string& trig_to = steps[last].to;
    if (!dd) {
      report.anomalies.push_back({AnomalyKind::unresolved_decrease, trig_from, trig_to,
                                  interrupted ? "evident money-growth decrease followed by a double rise"
                                              : "evident money-growth decrease with no later double drop"});
    } else {
      claimed[*dd] = true;
      const std::size_t length = *dd - buffer_start;
      if (length == 0) {
        report.anomalies.push_back({AnomalyKind::dd_without_buffer, steps[*dd].from, steps[*dd].to,
                                    "double drop immediately after the money-growth decrease"});
      } else if (length > th.max_buffer_steps) {
        report.anomalies.push_back({AnomalyKind::buffer_too_long, steps[buffer_start].from, steps[*dd - 1].to,
                                    "buffer of " + std::to_string(length) + " steps exceeds the limit of " +
                                        std::to_string(th.max_buffer_steps)});
      } else {
        BufferEpisode ep;
        ep.trigger_from = trig_from;
        ep.trigger_to = trig_to;
        for (std::size_t k = buffer_start; k < *dd; ++k) ep.buffer_steps.push_back(k);
        ep.buffer_from = steps[buffer_start].from;
        ep.buffer_to = steps[*dd - 1].to;
        ep.dd_step = *dd;
        ep.dd_period = steps[*dd].to;
        report.episodes.push_back(std::move(ep));
      }
    }
    i = last + 1;
  }

  for (std::size_t s = 0; s < n; ++s) {
    const bool run_start = has_label(steps[s], BehaviorLabel::double_drop) &&
                           (s == 0 || !has_label(steps[s - 1], BehaviorLabel::double_drop));
    if (run_start && !claimed[s])
      report.anomalies.push_back({AnomalyKind::dd_without_trigger, steps[s].from, steps[s].to,
                                  "double drop without a preceding evident money-growth decrease"});
  }
  return report;
}

}  // namespace dqe
