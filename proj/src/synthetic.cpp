#include "dqe/synthetic.hpp"

#include <cmath>
#include <cstdio>
#include <random>

namespace dqe {

Panel synthetic_balanced_panel(const SyntheticPanelSpec& spec) {
  if (spec.countries == 0 || spec.years == 0) throw InputError("synthetic panel needs countries and years");
  if (!(spec.noise_sigma >= 0.0)) throw InputError("noise sigma must be >= 0");

  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> log_gap(std::log(0.5), std::log(100.0));
  std::uniform_real_distribution<double> growth(-2.0, 8.0);
  std::normal_distribution<double> noise(0.0, spec.noise_sigma > 0.0 ? spec.noise_sigma : 1.0);

  Panel panel;
  for (std::size_t i = 0; i < spec.countries; ++i) {
    char name[16];
    std::snprintf(name, sizeof name, "C%03zu", i);
    const double gap = std::exp(log_gap(rng));
    const double g = growth(rng);
    const double q = g + gap;
    const double shock = spec.noise_sigma > 0.0 ? noise(rng) : 0.0;
    const double c = std::pow(q - g, spec.slope) * std::exp(shock);
    auto& series = panel[name];
    for (std::size_t y = 0; y < spec.years; ++y)
      series.push_back({std::to_string(spec.first_year + static_cast<int>(y)), q, g, c});
  }
  return panel;
}

}  // namespace dqe
