#pragma once

#include <cstddef>
#include <cstdint>

#include "dqe/data_pipeline.hpp"

namespace dqe {

struct SyntheticPanelSpec {
  std::size_t countries = 161;
  std::size_t years = 20;
  int first_year = 1960;
  double slope = 1.0;        // log c = slope * log(q - g) + noise
  double noise_sigma = 0.0;  // standard deviation of the log-inflation noise
  std::uint64_t seed = 1;
};

/// Country panel whose per-country averages sit on the generating log-log
/// line. Each country keeps constant (q, g, c) across its years, so the
/// averages equal the drawn values up to rounding.
Panel synthetic_balanced_panel(const SyntheticPanelSpec& spec);

}  // namespace dqe
