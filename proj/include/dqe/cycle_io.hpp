#pragma once

#include <iosfwd>

#include <json.hpp>

#include "dqe/cycle_classifier.hpp"

namespace dqe {

/// {steps, labels, periods, segments, buffers, anomalies, sensitivity, thresholds, notes}
nlohmann::ordered_json spectrum_to_json(const MacroSeries& series, const Spectrum& spectrum,
                                        const BufferReport& buffers, const Thresholds& th);

void write_spectrum_table(std::ostream& out, const MacroSeries& series, const Spectrum& spectrum,
                          const BufferReport& buffers, const Thresholds& th);

void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum);

}  // namespace dqe
