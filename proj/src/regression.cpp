#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>

#include "csv_util.hpp"

#include "dqe/data_pipeline.hpp"

namespace dqe {

namespace {

int parse_year(const std::string& country, const std::string& period) {
  int year = 0;
  const auto [ptr, ec] = std::from_chars(period.data(), period.data() + period.size(), year);
  if (ec != std::errc() || ptr != period.data() + period.size())
    throw InputError("country " + country + ": period '" + period + "' is not an integer year");
  return year;
}

}  // namespace

AggregateReport country_aggregates(const Panel& panel, int year_from, int year_to, std::size_t min_coverage) {
  if (year_from > year_to) throw InputError("year range: start after end");
  AggregateReport report;
  for (const auto& [country, series] : panel) {
    double sq = 0.0, sg = 0.0, sc = 0.0;
    std::size_t n = 0;
    for (const auto& obs : series) {
      const int year = parse_year(country, obs.period);
      if (year < year_from || year > year_to) continue;
      if (!std::isfinite(obs.q) || !std::isfinite(obs.g) || !std::isfinite(obs.c)) continue;
      sq += obs.q;
      sg += obs.g;
      sc += obs.c;
      ++n;
    }
    if (n < min_coverage || n == 0) {
      report.excluded_coverage.push_back(country);
      continue;
    }
    const double dn = static_cast<double>(n);
    report.aggregates.push_back({country, sq / dn, sg / dn, sc / dn, n});
  }
  return report;
}

RegressionResult ols(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InputError("ols: x and y differ in length");
  const std::size_t n = x.size();
  if (n < 3) throw InsufficientDataError("regression needs at least 3 points, got " + std::to_string(n));

  const double dn = static_cast<double>(n);
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= dn;
  my /= dn;

  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0.0)) throw InsufficientDataError("regression needs spread in the regressor");

  RegressionResult r;
  r.n_points = n;
  r.slope = sxy / sxx;
  r.intercept = my - r.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = y[i] - r.intercept - r.slope * x[i];
    sse += e * e;
  }
  r.slope_stderr = std::sqrt(sse / ((dn - 2.0) * sxx));
  r.correlation = syy > 0.0 ? std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0) : 0.0;
  return r;
}

RegressionReport balanced_path_regression(const AggregateReport& aggregates) {
  RegressionReport report;
  report.excluded_coverage = aggregates.excluded_coverage;
  report.n_excluded_coverage = aggregates.excluded_coverage.size();

  std::vector<double> xs, ys;
  for (const auto& a : aggregates.aggregates) {
    const double gap = a.avg_q - a.avg_g;
    if (!(gap > 0.0) || !(a.avg_c > 0.0)) {
      report.excluded_positivity.push_back(a.country);
      continue;
    }
    ScatterPoint p{a.country, gap, a.avg_c, std::log(gap), std::log(a.avg_c)};
    xs.push_back(p.log_gap);
    ys.push_back(p.log_c);
    report.points.push_back(std::move(p));
  }
  report.n_excluded_positivity = report.excluded_positivity.size();
  report.n_used = report.points.size();
  report.n_input = report.n_used + report.n_excluded_positivity + report.n_excluded_coverage;
  if (report.n_used < 3)
    throw InsufficientDataError("only " + std::to_string(report.n_used) + " usable countries (need 3) after excluding " +
                                std::to_string(report.n_excluded_positivity) + " non-positive and " +
                                std::to_string(report.n_excluded_coverage) + " low-coverage");
  report.result = ols(xs, ys);
  return report;
}

nlohmann::ordered_json regression_to_json(const RegressionReport& report) {
  nlohmann::ordered_json j;
  j["slope"] = report.result.slope;
  j["slope_stderr"] = report.result.slope_stderr;
  j["correlation"] = report.result.correlation;
  j["intercept"] = report.result.intercept;
  j["n_points"] = report.result.n_points;
  j["n_input"] = report.n_input;
  j["n_used"] = report.n_used;
  j["n_excluded_positivity"] = report.n_excluded_positivity;
  j["n_excluded_coverage"] = report.n_excluded_coverage;
  j["excluded"] = {{"positivity", report.excluded_positivity}, {"coverage", report.excluded_coverage}};
  return j;
}

void write_scatter_csv(std::ostream& out, const RegressionReport& report) {
  out << "country,gap,avg_c,log_gap,log_c\n";
  for (const auto& p : report.points)
    out << csv::quote_if_needed(p.country) << ',' << csv::format_double(p.gap) << ',' << csv::format_double(p.avg_c)
        << ',' << csv::format_double(p.log_gap) << ',' << csv::format_double(p.log_c) << '\n';
}

}  // namespace dqe
