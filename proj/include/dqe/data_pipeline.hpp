#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "dqe/cycle_classifier.hpp"

namespace dqe {

/// Broad money, real GDP and CPI growth for China, 2002-2016 (percent per year).
MacroSeries china_fixture();

/// Per-country series; the key is empty when the source had no country column.
using Panel = std::map<std::string, MacroSeries>;

struct LoadedPanel {
  Panel series;
  std::size_t dropped_rows = 0;  // rows with at least one empty or NA cell
  bool has_country = false;
};

/// CSV with header `country?,period,q,g,c` in any column order. Empty, "NA",
/// "NaN" and ".." cells mark a row as missing and the row is dropped.
/// InputError on an empty file, a bad header, non-numeric cells or a
/// duplicate (country, period) key.
LoadedPanel parse_series_csv(std::istream& in, const std::string& source = "<stream>");
LoadedPanel load_series(const std::filesystem::path& path);

/// Convenience for single-country inputs.
MacroSeries load_single_series(const std::filesystem::path& path);

void write_series_csv(std::ostream& out, const MacroSeries& series);
void write_panel_csv(std::ostream& out, const Panel& panel);

struct CountryAggregate {
  std::string country;
  double avg_q = 0.0;
  double avg_g = 0.0;
  double avg_c = 0.0;
  std::size_t n_years = 0;
};

struct AggregateReport {
  std::vector<CountryAggregate> aggregates;  // ordered by country
  std::vector<std::string> excluded_coverage;
};

/// Arithmetic means over the years in [year_from, year_to]. Periods must be
/// integer years. Countries with fewer than `min_coverage` years are excluded.
AggregateReport country_aggregates(const Panel& panel, int year_from, int year_to, std::size_t min_coverage = 10);

struct RegressionResult {
  double slope = 0.0;
  double slope_stderr = 0.0;
  double correlation = 0.0;
  double intercept = 0.0;
  std::size_t n_points = 0;
};

/// Ordinary least squares of y on x. InsufficientDataError with fewer than
/// three points or no spread in x.
RegressionResult ols(std::span<const double> x, std::span<const double> y);

struct ScatterPoint {
  std::string country;
  double gap = 0.0;    // avg_q - avg_g
  double avg_c = 0.0;
  double log_gap = 0.0;
  double log_c = 0.0;
};

struct RegressionReport {
  RegressionResult result;
  std::size_t n_input = 0;  // n_used + n_excluded_positivity + n_excluded_coverage
  std::size_t n_used = 0;
  std::size_t n_excluded_positivity = 0;
  std::size_t n_excluded_coverage = 0;
  std::vector<ScatterPoint> points;
  std::vector<std::string> excluded_positivity;
  std::vector<std::string> excluded_coverage;
};

/// Log-log fit of average inflation on the money-output growth gap. Countries
/// where either side is not positive cannot enter the log plot and are counted
/// as exclusions.
RegressionReport balanced_path_regression(const AggregateReport& aggregates);

nlohmann::ordered_json regression_to_json(const RegressionReport& report);

/// Header `country,gap,avg_c,log_gap,log_c`.
void write_scatter_csv(std::ostream& out, const RegressionReport& report);

}  // namespace dqe
