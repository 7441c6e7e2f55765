#pragma once

// Minimal client for the World Bank indicators API. Each indicator is cached
// as `<cache>/<code>.csv` with columns `country,period,<role>`; a warm cache is
// never re-fetched.

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "dqe/data_pipeline.hpp"

namespace dqe {

struct IndicatorSpec {
  char role;  // 'q', 'g' or 'c'
  std::string code;
};

/// Broad money growth, GDP growth (constant prices) and CPI inflation.
std::vector<IndicatorSpec> default_indicators();

/// Parse "q=CODE,g=CODE,c=CODE"; roles must be distinct.
std::vector<IndicatorSpec> parse_indicator_list(const std::string& text);

struct FetchOptions {
  std::string base_url = "https://api.worldbank.org/v2";
  std::vector<IndicatorSpec> indicators = default_indicators();
  int year_from = 1960;
  int year_to = 2015;
  std::filesystem::path cache_dir = "wb_cache";
  int max_retries = 3;
  std::chrono::milliseconds backoff{500};
  int per_page = 20000;
};

struct FetchReport {
  std::vector<std::filesystem::path> files;
  std::size_t network_calls = 0;
  std::size_t cache_hits = 0;
};

class UnknownIndicatorError : public InputError {
 public:
  UnknownIndicatorError(const std::string& code, const std::string& detail)
      : InputError("unknown indicator code '" + code + "': " + detail), code_(code) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

/// Network failure after all retries. `cached()` lists indicators that were
/// already available so callers can report a partial cache.
class FetchError : public std::runtime_error {
 public:
  FetchError(const std::string& what, std::vector<std::string> cached)
      : std::runtime_error(what), cached_(std::move(cached)) {}
  const std::vector<std::string>& cached() const { return cached_; }

 private:
  std::vector<std::string> cached_;
};

struct IndicatorRow {
  std::string country;
  std::string period;
  double value;
};

struct IndicatorPage {
  int page = 1;
  int pages = 1;
  std::vector<IndicatorRow> rows;  // null values are skipped
};

/// Decode one page of the provider's JSON. UnknownIndicatorError when the
/// payload is an error message.
IndicatorPage parse_indicator_page(const std::string& body, const std::string& code);

FetchReport fetch_worldbank(const FetchOptions& options);

/// Join cached indicator files into complete (q, g, c) rows per country.
/// Country-years missing any indicator are dropped and counted.
LoadedPanel load_indicator_panel(const std::filesystem::path& cache_dir, const std::vector<IndicatorSpec>& indicators);

}  // namespace dqe
