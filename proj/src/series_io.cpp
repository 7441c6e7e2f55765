#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <utility>

#include "csv_util.hpp"
#include "dqe/data_pipeline.hpp"

namespace dqe {

LoadedPanel parse_series_csv(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!csv::trim(line).empty()) {
      header = csv::split_line(line);
      break;
    }
  }
  if (header.empty()) throw InputError(source + ": empty series file");

  int col_country = -1, col_period = -1, col_q = -1, col_g = -1, col_c = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    const auto name = csv::trim(header[i]);
    int* slot = nullptr;
    if (name == "country") slot = &col_country;
    else if (name == "period") slot = &col_period;
    else if (name == "q") slot = &col_q;
    else if (name == "g") slot = &col_g;
    else if (name == "c") slot = &col_c;
    else throw InputError(source + ": unexpected column '" + name + "' (schema is country?,period,q,g,c)");
    if (*slot >= 0) throw InputError(source + ": duplicate column '" + name + "'");
    *slot = static_cast<int>(i);
  }
  if (col_period < 0 || col_q < 0 || col_g < 0 || col_c < 0)
    throw InputError(source + ": header must contain period,q,g,c");

  LoadedPanel out;
  out.has_country = col_country >= 0;
  std::set<std::pair<std::string, std::string>> seen;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (csv::trim(line).empty()) continue;
    auto fields = csv::split_line(line);
    const auto where = source + ":" + std::to_string(line_no);
    if (fields.size() != header.size())
      throw InputError(where + ": expected " + std::to_string(header.size()) + " fields, got " +
                       std::to_string(fields.size()));
    for (auto& f : fields) f = csv::trim(f);
    ++rows;

    const std::string country = out.has_country ? fields[static_cast<std::size_t>(col_country)] : std::string();
    const std::string& period = fields[static_cast<std::size_t>(col_period)];
    if (period.empty()) throw InputError(where + ": empty period");
    if (!seen.emplace(country, period).second)
      throw InputError(where + ": duplicate key (" + country + ", " + period + ")");

    bool missing = false;
    double values[3] = {0.0, 0.0, 0.0};
    const int cols[3] = {col_q, col_g, col_c};
    for (int j = 0; j < 3; ++j) {
      const auto& cell = fields[static_cast<std::size_t>(cols[j])];
      if (csv::is_missing(cell)) {
        missing = true;
        continue;
      }
      const auto v = csv::to_double(cell);
      if (!v) throw InputError(where + ": non-numeric cell '" + cell + "'");
      values[j] = *v;
    }
    if (missing) {
      ++out.dropped_rows;
      continue;
    }
    out.series[country].push_back({period, values[0], values[1], values[2]});
  }
  if (rows == 0) throw InputError(source + ": empty series file");
  return out;
}

LoadedPanel load_series(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return parse_series_csv(in, path.string());
}

MacroSeries load_single_series(const std::filesystem::path& path) {
  auto panel = load_series(path);
  if (panel.series.size() > 1) throw InputError(path.string() + ": expected a single series, found several countries");
  if (panel.series.empty()) throw InputError(path.string() + ": no complete rows");
  return std::move(panel.series.begin()->second);
}

void write_series_csv(std::ostream& out, const MacroSeries& series) {
  out << "period,q,g,c\n";
  for (const auto& o : series)
    out << csv::quote_if_needed(o.period) << ',' << csv::format_double(o.q) << ',' << csv::format_double(o.g) << ','
        << csv::format_double(o.c) << '\n';
}

void write_panel_csv(std::ostream& out, const Panel& panel) {
  out << "country,period,q,g,c\n";
  for (const auto& [country, series] : panel)
    for (const auto& o : series)
      out << csv::quote_if_needed(country) << ',' << csv::quote_if_needed(o.period) << ',' << csv::format_double(o.q)
          << ',' << csv::format_double(o.g) << ',' << csv::format_double(o.c) << '\n';
}

}  // namespace dqe
