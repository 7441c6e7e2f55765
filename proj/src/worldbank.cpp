#include "dqe/worldbank.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <thread>
#include <tuple>

#include <httplib.h>
#include <json.hpp>

#include "csv_util.hpp"

namespace dqe {

namespace {

using nlohmann::json;

struct SplitUrl {
  std::string scheme_host;
  std::string prefix;
};

SplitUrl split_base_url(const std::string& base) {
  const auto scheme_end = base.find("://");
  if (scheme_end == std::string::npos) throw InputError("base url must start with http:// or https://: " + base);
  const auto path_start = base.find('/', scheme_end + 3);
  SplitUrl out;
  if (path_start == std::string::npos) {
    out.scheme_host = base;
  } else {
    out.scheme_host = base.substr(0, path_start);
    out.prefix = base.substr(path_start);
  }
  while (!out.prefix.empty() && out.prefix.back() == '/') out.prefix.pop_back();
  return out;
}

std::filesystem::path cache_file(const std::filesystem::path& dir, const std::string& code) {
  return dir / (code + ".csv");
}

std::vector<std::string> cached_codes(const FetchOptions& options) {
  std::vector<std::string> out;
  for (const auto& ind : options.indicators)
    if (std::filesystem::exists(cache_file(options.cache_dir, ind.code))) out.push_back(ind.code);
  return out;
}

bool valid_role(char r) { return r == 'q' || r == 'g' || r == 'c'; }

bool period_less(const std::string& a, const std::string& b) {
  const auto na = csv::to_double(a);
  const auto nb = csv::to_double(b);
  if (na && nb) return *na < *nb;
  return a < b;
}

}  // namespace

std::vector<IndicatorSpec> default_indicators() {
  return {{'q', "FM.LBL.BMNY.ZG"}, {'g', "NY.GDP.MKTP.KD.ZG"}, {'c', "FP.CPI.TOTL.ZG"}};
}

std::vector<IndicatorSpec> parse_indicator_list(const std::string& text) {
  std::vector<IndicatorSpec> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = csv::trim(item);
    if (item.size() < 3 || item[1] != '=' || !valid_role(item[0]))
      throw InputError("indicator entry '" + item + "' must look like q=CODE, g=CODE or c=CODE");
    out.push_back({item[0], item.substr(2)});
  }
  std::array<int, 3> seen{};
  for (const auto& ind : out) {
    const auto idx = ind.role == 'q' ? 0 : (ind.role == 'g' ? 1 : 2);
    if (++seen[static_cast<std::size_t>(idx)] > 1)
      throw InputError(std::string("indicator role '") + ind.role + "' given twice");
  }
  if (out.size() != 3) throw InputError("indicators must name q, g and c");
  return out;
}

IndicatorPage parse_indicator_page(const std::string& body, const std::string& code) {
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::parse_error& e) {
    throw InputError("indicator " + code + ": malformed response (" + e.what() + ")");
  }
  if (!doc.is_array() || doc.empty() || !doc[0].is_object())
    throw InputError("indicator " + code + ": unexpected response layout");

  const auto& meta = doc[0];
  if (meta.contains("message")) {
    std::string detail = "provider rejected the request";
    const auto& msg = meta["message"];
    if (msg.is_array() && !msg.empty() && msg[0].contains("value") && msg[0]["value"].is_string())
      detail = msg[0]["value"].get<std::string>();
    throw UnknownIndicatorError(code, detail);
  }

  IndicatorPage page;
  auto as_int = [](const json& v, int fallback) {
    if (v.is_number_integer()) return v.get<int>();
    if (v.is_string()) {
      try {
        return std::stoi(v.get<std::string>());
      } catch (const std::exception&) {
        return fallback;
      }
    }
    return fallback;
  };
  page.page = as_int(meta.value("page", json()), 1);
  page.pages = as_int(meta.value("pages", json()), 1);

  if (doc.size() < 2 || doc[1].is_null()) return page;
  for (const auto& row : doc[1]) {
    if (!row.contains("value") || !row["value"].is_number()) continue;
    std::string country;
    if (row.contains("countryiso3code") && row["countryiso3code"].is_string())
      country = row["countryiso3code"].get<std::string>();
    if (country.empty() && row.contains("country") && row["country"].contains("id"))
      country = row["country"]["id"].get<std::string>();
    if (country.empty() || !row.contains("date") || !row["date"].is_string()) continue;
    page.rows.push_back({country, row["date"].get<std::string>(), row["value"].get<double>()});
  }
  return page;
}

FetchReport fetch_worldbank(const FetchOptions& options) {
  if (options.year_from > options.year_to) throw InputError("year range: start after end");
  if (options.indicators.empty()) throw InputError("no indicators requested");
  for (const auto& ind : options.indicators)
    if (!valid_role(ind.role) || ind.code.empty()) throw InputError("invalid indicator spec '" + ind.code + "'");

  std::filesystem::create_directories(options.cache_dir);
  const auto url = split_base_url(options.base_url);

  FetchReport report;
  for (const auto& ind : options.indicators) {
    const auto path = cache_file(options.cache_dir, ind.code);
    if (std::filesystem::exists(path)) {
      ++report.cache_hits;
      report.files.push_back(path);
      continue;
    }

    httplib::Client client(url.scheme_host);
    client.set_connection_timeout(15);
    client.set_read_timeout(60);
    client.set_follow_location(true);

    std::vector<IndicatorRow> rows;
    int page_no = 1;
    int pages = 1;
    do {
      const std::string request = url.prefix + "/country/all/indicator/" + ind.code +
                                  "?format=json&date=" + std::to_string(options.year_from) + ":" +
                                  std::to_string(options.year_to) + "&per_page=" + std::to_string(options.per_page) +
                                  "&page=" + std::to_string(page_no);
      std::optional<std::string> body;
      std::string last_error;
      auto delay = options.backoff;
      for (int attempt = 0; attempt <= options.max_retries; ++attempt) {
        if (attempt > 0) {
          std::this_thread::sleep_for(delay);
          delay *= 2;
        }
        ++report.network_calls;
        auto res = client.Get(request);
        if (!res) {
          last_error = httplib::to_string(res.error());
          continue;
        }
        if (res->status == 404 || res->status == 400)
          throw UnknownIndicatorError(ind.code, "HTTP " + std::to_string(res->status));
        if (res->status >= 500 || res->status == 429) {
          last_error = "HTTP " + std::to_string(res->status);
          continue;
        }
        if (res->status != 200) throw FetchError("indicator " + ind.code + ": HTTP " + std::to_string(res->status),
                                                 cached_codes(options));
        body = res->body;
        break;
      }
      if (!body)
        throw FetchError("indicator " + ind.code + ": giving up after " + std::to_string(options.max_retries + 1) +
                             " attempts (" + last_error + ")",
                         cached_codes(options));
      auto page = parse_indicator_page(*body, ind.code);
      pages = page.pages;
      rows.insert(rows.end(), std::make_move_iterator(page.rows.begin()), std::make_move_iterator(page.rows.end()));
      ++page_no;
    } while (page_no <= pages);

    std::sort(rows.begin(), rows.end(), [](const IndicatorRow& a, const IndicatorRow& b) {
      if (a.country != b.country) return a.country < b.country;
      return period_less(a.period, b.period);
    });

    const auto tmp = path.string() + ".part";
    {
      std::ofstream out(tmp, std::ios::binary);
      if (!out) throw InputError("cannot write " + tmp);
      out << "country,period," << ind.role << '\n';
      for (const auto& r : rows)
        out << csv::quote_if_needed(r.country) << ',' << csv::quote_if_needed(r.period) << ','
            << csv::format_double(r.value) << '\n';
    }
    std::filesystem::rename(tmp, path);
    report.files.push_back(path);
  }
  return report;
}

LoadedPanel load_indicator_panel(const std::filesystem::path& cache_dir, const std::vector<IndicatorSpec>& indicators) {
  using Key = std::pair<std::string, std::string>;
  struct Partial {
    std::optional<double> q, g, c;
  };
  std::map<Key, Partial> cells;

  for (const auto& ind : indicators) {
    const auto path = cache_file(cache_dir, ind.code);
    std::ifstream in(path);
    if (!in) throw InputError("missing cached indicator file " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw InputError(path.string() + ": empty file");
    const auto header = csv::split_line(line);
    if (header.size() != 3 || csv::trim(header[0]) != "country" || csv::trim(header[1]) != "period")
      throw InputError(path.string() + ": header must be country,period,<role>");
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
      ++line_no;
      if (csv::trim(line).empty()) continue;
      const auto f = csv::split_line(line);
      if (f.size() != 3) throw InputError(path.string() + ":" + std::to_string(line_no) + ": expected 3 fields");
      auto& cell = cells[{csv::trim(f[0]), csv::trim(f[1])}];
      const auto value_text = csv::trim(f[2]);
      if (csv::is_missing(value_text)) continue;
      const auto v = csv::to_double(value_text);
      if (!v) throw InputError(path.string() + ":" + std::to_string(line_no) + ": non-numeric value");
      (ind.role == 'q' ? cell.q : ind.role == 'g' ? cell.g : cell.c) = *v;
    }
  }

  LoadedPanel out;
  out.has_country = true;
  for (const auto& [key, cell] : cells) {
    if (!cell.q || !cell.g || !cell.c) {
      ++out.dropped_rows;
      continue;
    }
    out.series[key.first].push_back({key.second, *cell.q, *cell.g, *cell.c});
  }
  for (auto& [country, series] : out.series)
    std::sort(series.begin(), series.end(),
              [](const MacroObservation& a, const MacroObservation& b) { return period_less(a.period, b.period); });
  return out;
}

}  // namespace dqe
