#include "dqe/cycle_io.hpp"

#include <cstdio>
#include <ostream>

namespace dqe {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string fixed(double v, int digits) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  std::string out(buf);
  if (out.find_first_not_of("-0.") == std::string::npos && out[0] == '-') out.erase(0, 1);  // no "-0.000"
  return out;
}

}  // namespace

ordered_json spectrum_to_json(const MacroSeries& series, const Spectrum& spectrum, const BufferReport& buffers,
                              const Thresholds& th) {
  ordered_json doc;
  doc["steps"] = ordered_json::array();
  doc["labels"] = ordered_json::array();
  for (const auto& s : spectrum.steps) {
    ordered_json j;
    j["from"] = s.from;
    j["to"] = s.to;
    j["dq"] = s.dq;
    j["dg"] = s.dg;
    j["dc"] = s.dc;
    j["elasticity"] = s.elasticity ? json(*s.elasticity) : json(nullptr);
    j["label"] = s.label ? json(to_string(*s.label)) : json(nullptr);
    j["cycle_class"] = s.cycle_class ? json(to_string(*s.cycle_class)) : json(nullptr);
    j["q_direction"] = to_string(s.q_direction);
    j["driving_direction"] = to_string(s.driving_direction);
    j["elasticity_class"] = s.elasticity_class ? json(to_string(*s.elasticity_class)) : json(nullptr);
    j["coarse"] = s.coarse;
    j["degenerate"] = s.degenerate;
    doc["steps"].push_back(std::move(j));
    if (s.label) doc["labels"].push_back(to_string(*s.label));
  }

  doc["periods"] = ordered_json::array();
  for (const auto& p : spectrum.periods) doc["periods"].push_back({{"period", p.period}, {"tag", p.tag}});
  doc["segments"] = ordered_json::array();
  for (const auto& s : spectrum.segments) doc["segments"].push_back({{"from", s.from}, {"to", s.to}, {"tag", s.tag}});

  doc["buffers"] = ordered_json::array();
  for (const auto& b : buffers.episodes) {
    ordered_json j;
    j["trigger"] = {{"from", b.trigger_from}, {"to", b.trigger_to}};
    j["buffer"] = {{"from", b.buffer_from}, {"to", b.buffer_to}, {"steps", b.buffer_steps}};
    j["dd_period"] = b.dd_period;
    doc["buffers"].push_back(std::move(j));
  }
  doc["anomalies"] = ordered_json::array();
  for (const auto& a : buffers.anomalies)
    doc["anomalies"].push_back({{"kind", to_string(a.kind)}, {"from", a.from}, {"to", a.to}, {"message", a.message}});

  doc["sensitivity"] = ordered_json::array();
  for (const auto& obs : series) {
    const auto s = sensitivity_index(obs, th);
    doc["sensitivity"].push_back(
        {{"period", obs.period}, {"gap", s.gap ? json(*s.gap) : json(nullptr)}, {"flag", to_string(s.flag)}});
  }

  doc["thresholds"] = {{"evident_up", th.evident_up},
                       {"evident_down", th.evident_down},
                       {"sensitivity_ratio", th.sensitivity_ratio},
                       {"sensitive_trigger", th.sensitive_trigger},
                       {"tie_eps", th.tie_eps},
                       {"slope_delta", th.slope_delta},
                       {"max_buffer_steps", th.max_buffer_steps}};
  doc["notes"] = spectrum.notes;
  return doc;
}

void write_spectrum_table(std::ostream& out, const MacroSeries& series, const Spectrum& spectrum,
                          const BufferReport& buffers, const Thresholds& th) {
  char line[256];
  std::snprintf(line, sizeof line, "%-14s %7s %7s %7s %8s %-14s %-4s %-5s\n", "migration", "dq", "dg", "dc", "slope",
                "label", "class", "tag");
  out << line;
  for (const auto& s : spectrum.steps) {
    const auto migration = s.from + "->" + s.to;
    const auto slope = s.elasticity ? fixed(*s.elasticity, 3) : std::string("n/a");
    const auto label = s.label ? short_name(*s.label) : std::string("-");
    const auto cls = s.cycle_class ? to_string(*s.cycle_class) : std::string("-");
    std::snprintf(line, sizeof line, "%-14s %7s %7s %7s %8s %-14s %-4s %-5s\n", migration.c_str(),
                  fixed(s.dq, 2).c_str(), fixed(s.dg, 2).c_str(), fixed(s.dc, 2).c_str(), slope.c_str(), label.c_str(),
                  cls.c_str(), s.coarse.c_str());
    out << line;
  }

  out << "\nspectrum:";
  for (const auto& seg : spectrum.segments) out << ' ' << seg.tag << '[' << seg.from << '-' << seg.to << ']';
  out << "\n\nsensitivity (q/g - 1):\n";
  for (const auto& obs : series) {
    const auto s = sensitivity_index(obs, th);
    out << "  " << obs.period << "  " << (s.gap ? fixed(*s.gap * 100.0, 1) + "%" : std::string("n/a")) << "  "
        << to_string(s.flag) << '\n';
  }
  out << "\nbuffer episodes: " << buffers.episodes.size() << '\n';
  for (const auto& b : buffers.episodes)
    out << "  decrease " << b.trigger_from << "->" << b.trigger_to << ", buffer " << b.buffer_from << "-"
        << b.buffer_to << ", DD in " << b.dd_period << '\n';
  out << "anomalies: " << buffers.anomalies.size() << '\n';
  for (const auto& a : buffers.anomalies)
    out << "  " << to_string(a.kind) << ' ' << a.from << "->" << a.to << ": " << a.message << '\n';
  for (const auto& n : spectrum.notes) out << "note: " << n << '\n';
}

void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum) {
  out << "from,to,dq,dg,dc,elasticity,label,cycle_class,coarse\n";
  for (const auto& s : spectrum.steps) {
    out << s.from << ',' << s.to << ',' << s.dq << ',' << s.dg << ',' << s.dc << ',';
    if (s.elasticity) out << *s.elasticity;
    out << ',' << (s.label ? to_string(*s.label) : "") << ',' << (s.cycle_class ? to_string(*s.cycle_class) : "")
        << ',' << s.coarse << '\n';
  }
}

}  // namespace dqe
