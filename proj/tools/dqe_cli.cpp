// dqe: simulate the dynamical quantity equation, classify business-cycle
// migrations, resolve the money/elasticity/behaviour triangle, and run the
// balanced-path regression.
//
// Exit codes: 0 ok, 2 input error, 3 numeric/domain error, 4 insufficient
// data, 5 network failure.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "dqe/core_io.hpp"
#include "dqe/core_model.hpp"
#include "dqe/cycle_classifier.hpp"
#include "dqe/cycle_io.hpp"
#include "dqe/data_pipeline.hpp"
#include "dqe/synthetic.hpp"
#include "dqe/worldbank.hpp"
#include "manifest.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

enum ExitCode : int { kOk = 0, kInputError = 2, kDomainError = 3, kInsufficientData = 4, kNetworkError = 5 };

struct GlobalOptions {
  std::string out_dir = ".";
  std::string format = "json";
  std::uint64_t seed = 1;
};

fs::path prepare_out_dir(const GlobalOptions& g) {
  fs::path dir(g.out_dir);
  fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw dqe::InputError("cannot write " + path.string());
  out << text;
}

std::pair<int, int> parse_year_range(const std::string& text) {
  const auto colon = text.find(':');
  try {
    if (colon == std::string::npos) throw std::invalid_argument(text);
    return {std::stoi(text.substr(0, colon)), std::stoi(text.substr(colon + 1))};
  } catch (const std::exception&) {
    throw dqe::InputError("years: expected FROM:TO, got '" + text + "'");
  }
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string config;
  std::string schedule;
  double m0 = 0.0, v0 = 0.0, q = 0.0, alpha = 0.0;
  std::string knots;
  double k = 1.0, w0 = 1.0, y0 = 1.0, g = 0.0, t_end = 100.0, dt = 0.0;
  std::map<std::string, CLI::Option*> opts;

  bool given(const std::string& name) const { return opts.at(name)->count() > 0; }
};

dqe::TabulatedSupply load_knots(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw dqe::InputError("knots: cannot open " + path);
  dqe::TabulatedSupply tab;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (header) {
      header = false;
      if (line.rfind("t,", 0) == 0) continue;
    }
    std::stringstream ss(line);
    std::string a, b;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ','))
      throw dqe::InputError("knots: expected 't,M' rows in " + path);
    try {
      tab.times.push_back(std::stod(a));
      tab.values.push_back(std::stod(b));
    } catch (const std::exception&) {
      throw dqe::InputError("knots: non-numeric row '" + line + "'");
    }
  }
  return tab;
}

dqe::ScenarioConfig resolve_scenario(const SimulateArgs& a) {
  dqe::ScenarioConfig cfg;
  bool have_schedule = false;
  bool dt_given = false;
  if (!a.config.empty()) {
    std::ifstream in(a.config);
    if (!in) throw dqe::InputError("config: cannot open " + a.config);
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw dqe::InputError(std::string("config: ") + e.what());
    }
    cfg = dqe::parse_scenario_config(doc);
    have_schedule = true;
    dt_given = true;
  }

  // flags override the config file; without a config the flag defaults apply
  const bool from_flags = a.config.empty();
  if (from_flags || a.given("--k")) cfg.params.k = a.k;
  if (from_flags || a.given("--W0")) cfg.params.w0 = a.w0;
  if (from_flags || a.given("--Y0")) cfg.params.y0 = a.y0;
  if (from_flags || a.given("--g")) cfg.params.g = a.g;
  if (from_flags || a.given("--t-end")) cfg.t_end = a.t_end;

  if (!a.schedule.empty()) {
    auto need = [&](const char* flag, double value) {
      if (!a.given(flag)) throw dqe::InputError(std::string("schedule.") + (flag + 2) + ": required for " + a.schedule);
      return value;
    };
    if (a.schedule == "constant")
      cfg.schedule = dqe::ConstantSupply{need("--M0", a.m0)};
    else if (a.schedule == "linear")
      cfg.schedule = dqe::LinearSupply{need("--V0", a.v0)};
    else if (a.schedule == "exponential")
      cfg.schedule = dqe::ExponentialSupply{need("--M0", a.m0), need("--q", a.q)};
    else if (a.schedule == "output-power")
      cfg.schedule = dqe::OutputPowerSupply{need("--alpha", a.alpha)};
    else if (a.schedule == "tabulated") {
      if (a.knots.empty()) throw dqe::InputError("schedule.knots: --knots FILE required for tabulated");
      cfg.schedule = load_knots(a.knots);
    } else
      throw dqe::InputError("schedule.type: unknown schedule '" + a.schedule + "'");
    have_schedule = true;
  }
  if (!have_schedule) throw dqe::InputError("schedule: give --config or --schedule");

  if (a.given("--dt"))
    cfg.dt = a.dt;
  else if (!dt_given)
    cfg.dt = cfg.params.k / 100.0;

  dqe::validate(cfg.schedule);
  dqe::validate(cfg.params);
  return cfg;
}

int run_simulate(const SimulateArgs& args, const GlobalOptions& global) {
  const auto cfg = resolve_scenario(args);
  const auto trajectory = dqe::integrate(cfg.schedule, cfg.params, cfg.t_end, cfg.dt);
  const auto regime = dqe::long_run_regime(cfg.schedule, cfg.params);

  const auto dir = prepare_out_dir(global);
  const auto traj_path = dir / "trajectory.csv";
  {
    std::ofstream out(traj_path, std::ios::binary);
    if (!out) throw dqe::InputError("cannot write " + traj_path.string());
    dqe::write_trajectory_csv(out, trajectory);
  }

  auto regime_json = dqe::regime_to_json(regime);
  regime_json["schedule"] = dqe::schedule_name(cfg.schedule);
  const auto& last = trajectory.back();
  regime_json["simulated"] = {{"t_end", last.t}, {"c_end", last.c}, {"v_end", last.v}, {"W_end", last.w}};
  const auto regime_path = dir / "regime.json";
  write_text(regime_path, regime_json.dump(2) + "\n");

  dqe::cli::RunManifest manifest;
  manifest.subcommand = "simulate";
  manifest.parameters = dqe::scenario_to_json(cfg);
  if (!args.config.empty()) manifest.inputs.push_back({args.config, dqe::cli::sha256_file(args.config)});
  if (!args.knots.empty()) manifest.inputs.push_back({args.knots, dqe::cli::sha256_file(args.knots)});
  manifest.outputs = {traj_path.string(), regime_path.string()};
  dqe::cli::write_manifest(dir, manifest);

  if (global.format == "table" || global.format == "csv")
    std::cout << "branch=" << dqe::to_string(regime.branch) << " samples=" << trajectory.size()
              << " c_end=" << last.c << " v_end=" << last.v << '\n';
  else
    std::cout << regime_json.dump(2) << '\n';
  return kOk;
}

// ---------------------------------------------------------------- classify

struct ClassifyArgs {
  std::string input;
  std::string fixture;
  dqe::Thresholds th;
};

int run_classify(const ClassifyArgs& args, const GlobalOptions& global) {
  args.th.validate();
  dqe::MacroSeries series;
  dqe::cli::RunManifest manifest;
  manifest.subcommand = "classify";
  if (!args.fixture.empty()) {
    if (args.fixture != "china") throw dqe::InputError("fixture: only 'china' is embedded");
    series = dqe::china_fixture();
  } else if (!args.input.empty()) {
    series = dqe::load_single_series(args.input);
    manifest.inputs.push_back({args.input, dqe::cli::sha256_file(args.input)});
  } else {
    throw dqe::InputError("input: give --input FILE or --fixture china");
  }

  const auto spectrum = dqe::classify_series(series, args.th);
  const auto buffers = dqe::detect_buffer(series, spectrum, args.th);
  const auto doc = dqe::spectrum_to_json(series, spectrum, buffers, args.th);

  const auto dir = prepare_out_dir(global);
  const auto json_path = dir / "spectrum.json";
  write_text(json_path, doc.dump(2) + "\n");
  manifest.outputs.push_back(json_path.string());

  std::ostringstream text;
  if (global.format == "table") {
    dqe::write_spectrum_table(text, series, spectrum, buffers, args.th);
  } else if (global.format == "csv") {
    dqe::write_spectrum_csv(text, spectrum);
    const auto csv_path = dir / "spectrum.csv";
    write_text(csv_path, text.str());
    manifest.outputs.push_back(csv_path.string());
  } else {
    text << doc.dump(2) << '\n';
  }

  manifest.parameters = {{"fixture", args.fixture}, {"input", args.input}, {"thresholds", doc["thresholds"]}};
  dqe::cli::write_manifest(dir, manifest);
  std::cout << text.str();
  return kOk;
}

// ---------------------------------------------------------------- resolve

struct ResolveArgs {
  std::string q_dir;
  std::optional<double> slope;
  std::string elasticity;
  std::string behavior;
  std::string dg;
  double slope_delta = dqe::Thresholds{}.slope_delta;
};

int run_resolve(const ResolveArgs& args, const GlobalOptions& global) {
  dqe::TriangleQuery query;
  if (!args.q_dir.empty()) query.q_direction = dqe::parse_direction(args.q_dir);
  if (args.slope && !args.elasticity.empty()) throw dqe::InputError("give either --slope or --elasticity, not both");
  if (args.slope) query.elasticity = dqe::elasticity_class_of(*args.slope, args.slope_delta);
  if (!args.elasticity.empty()) query.elasticity = dqe::parse_elasticity_class(args.elasticity);
  if (!args.behavior.empty()) query.behavior = dqe::parse_behavior(args.behavior);
  if (!args.dg.empty()) query.dg_direction = dqe::parse_direction(args.dg);

  const auto row = dqe::resolve_triangle(query);
  ordered_json doc;
  doc["q_direction"] = dqe::to_string(row.q_direction);
  doc["elasticity_class"] = dqe::to_string(row.elasticity);
  doc["behavior"] = dqe::to_string(row.behavior);
  doc["behavior_name"] = dqe::short_name(row.behavior);
  std::string resolved;
  if (!query.q_direction) resolved = "q_direction";
  else if (!query.elasticity) resolved = "elasticity_class";
  else resolved = "behavior";
  doc["resolved"] = resolved;

  const auto dir = prepare_out_dir(global);
  const auto path = dir / "resolve.json";
  write_text(path, doc.dump(2) + "\n");

  dqe::cli::RunManifest manifest;
  manifest.subcommand = "resolve";
  manifest.parameters = {{"q_dir", args.q_dir},
                         {"slope", args.slope ? nlohmann::json(*args.slope) : nlohmann::json(nullptr)},
                         {"elasticity", args.elasticity},
                         {"behavior", args.behavior},
                         {"dg", args.dg},
                         {"slope_delta", args.slope_delta}};
  manifest.outputs = {path.string()};
  dqe::cli::write_manifest(dir, manifest);

  if (global.format == "json") {
    std::cout << doc.dump(2) << '\n';
  } else {
    const std::string value = resolved == "q_direction" ? dqe::to_string(row.q_direction)
                              : resolved == "elasticity_class" ? dqe::to_string(row.elasticity)
                                                               : dqe::short_name(row.behavior);
    std::cout << resolved << ": " << value << '\n';
  }
  return kOk;
}

// ---------------------------------------------------------------- regress

struct RegressArgs {
  std::string input;
  std::string cache;
  std::string indicators;
  std::string years = "1960:2015";
  std::size_t min_coverage = 10;
  std::size_t synthetic = 0;
  std::size_t synthetic_years = 20;
  double noise = 0.0;
  double generator_slope = 1.0;
};

int run_regress(const RegressArgs& args, const GlobalOptions& global) {
  const auto [year_from, year_to] = parse_year_range(args.years);
  dqe::cli::RunManifest manifest;
  manifest.subcommand = "regress";

  dqe::LoadedPanel panel;
  const int sources = !args.input.empty() + !args.cache.empty() + (args.synthetic > 0);
  if (sources != 1) throw dqe::InputError("input: give exactly one of --input, --cache, --synthetic");
  if (!args.input.empty()) {
    panel = dqe::load_series(args.input);
    manifest.inputs.push_back({args.input, dqe::cli::sha256_file(args.input)});
  } else if (!args.cache.empty()) {
    const auto inds = args.indicators.empty() ? dqe::default_indicators() : dqe::parse_indicator_list(args.indicators);
    panel = dqe::load_indicator_panel(args.cache, inds);
    for (const auto& ind : inds) {
      const auto p = fs::path(args.cache) / (ind.code + ".csv");
      manifest.inputs.push_back({p.string(), dqe::cli::sha256_file(p)});
    }
  } else {
    dqe::SyntheticPanelSpec spec;
    spec.countries = args.synthetic;
    spec.years = args.synthetic_years;
    spec.first_year = year_from;
    spec.noise_sigma = args.noise;
    spec.slope = args.generator_slope;
    spec.seed = global.seed;
    panel.series = dqe::synthetic_balanced_panel(spec);
    panel.has_country = true;
  }

  const auto aggregates = dqe::country_aggregates(panel.series, year_from, year_to, args.min_coverage);
  const auto report = dqe::balanced_path_regression(aggregates);

  const auto dir = prepare_out_dir(global);
  auto doc = dqe::regression_to_json(report);
  doc["dropped_rows"] = panel.dropped_rows;
  doc["years"] = {year_from, year_to};
  const auto json_path = dir / "regression.json";
  write_text(json_path, doc.dump(2) + "\n");
  const auto scatter_path = dir / "scatter.csv";
  {
    std::ofstream out(scatter_path, std::ios::binary);
    dqe::write_scatter_csv(out, report);
  }

  manifest.parameters = {{"input", args.input},
                         {"cache", args.cache},
                         {"indicators", args.indicators},
                         {"years", args.years},
                         {"min_coverage", args.min_coverage},
                         {"synthetic", args.synthetic},
                         {"synthetic_years", args.synthetic_years},
                         {"noise", args.noise},
                         {"generator_slope", args.generator_slope},
                         {"seed", global.seed}};
  manifest.outputs = {json_path.string(), scatter_path.string()};
  dqe::cli::write_manifest(dir, manifest);

  if (global.format == "table") {
    const auto& r = report.result;
    std::printf("slope        %.6f\nstderr       %.6f\ncorrelation  %.6f\nintercept    %.6f\nn            %zu\n"
                "excluded     %zu non-positive, %zu low coverage (of %zu)\n",
                r.slope, r.slope_stderr, r.correlation, r.intercept, r.n_points, report.n_excluded_positivity,
                report.n_excluded_coverage, report.n_input);
  } else {
    std::cout << doc.dump(2) << '\n';
  }
  return kOk;
}

// ---------------------------------------------------------------- fetch

struct FetchArgs {
  std::string indicators;
  std::string years = "1960:2015";
  std::string cache = "wb_cache";
  std::string base_url = dqe::FetchOptions{}.base_url;
  int retries = 3;
  int backoff_ms = 500;
};

int run_fetch(const FetchArgs& args, const GlobalOptions& global) {
  dqe::FetchOptions opts;
  if (!args.indicators.empty()) opts.indicators = dqe::parse_indicator_list(args.indicators);
  std::tie(opts.year_from, opts.year_to) = parse_year_range(args.years);
  opts.cache_dir = args.cache;
  opts.base_url = args.base_url;
  opts.max_retries = args.retries;
  opts.backoff = std::chrono::milliseconds(args.backoff_ms);

  const auto report = dqe::fetch_worldbank(opts);

  const auto dir = prepare_out_dir(global);
  dqe::cli::RunManifest manifest;
  manifest.subcommand = "fetch";
  nlohmann::ordered_json inds = nlohmann::ordered_json::array();
  for (const auto& ind : opts.indicators) inds.push_back({{"role", std::string(1, ind.role)}, {"code", ind.code}});
  manifest.parameters = {{"indicators", inds}, {"years", args.years}, {"cache", args.cache}, {"base_url", args.base_url}};
  for (const auto& f : report.files) manifest.outputs.push_back(f.string());
  dqe::cli::write_manifest(dir, manifest);

  ordered_json doc = {{"files", manifest.outputs}, {"network_calls", report.network_calls}, {"cache_hits", report.cache_hits}};
  std::cout << doc.dump(2) << '\n';
  return kOk;
}

template <class F>
int guarded(F&& fn) {
  try {
    return fn();
  } catch (const dqe::InsufficientDataError& e) {
    std::cerr << "insufficient data: " << e.what() << '\n';
    return kInsufficientData;
  } catch (const dqe::DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kDomainError;
  } catch (const dqe::InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::out_of_range& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const dqe::FetchError& e) {
    std::cerr << "network error: " << e.what() << '\n';
    if (!e.cached().empty()) {
      std::cerr << "already cached:";
      for (const auto& c : e.cached()) std::cerr << ' ' << c;
      std::cerr << '\n';
    }
    return kNetworkError;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInputError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamical quantity equation: simulation, cycle classification and balanced-path regression"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions global;
  app.add_option("--out-dir", global.out_dir, "Directory for outputs and manifest.json")->capture_default_str();
  app.add_option("--format", global.format, "Console format")
      ->check(CLI::IsMember({"json", "csv", "table"}))
      ->capture_default_str();
  app.add_option("--seed", global.seed, "Seed for synthetic data generators")->capture_default_str();

  // simulate
  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Integrate k dW/dt = M(t) - W and report the long-run regime");
  simulate->add_option("--config", sim.config, "Scenario JSON {schedule:{type,...}, k, W0, Y0, g, t_end, dt}");
  simulate->add_option("--schedule", sim.schedule, "constant | linear | exponential | output-power | tabulated")
      ->check(CLI::IsMember({"constant", "linear", "exponential", "output-power", "tabulated"}));
  sim.opts["--M0"] = simulate->add_option("--M0", sim.m0, "Initial money supply (constant, exponential)");
  sim.opts["--V0"] = simulate->add_option("--V0", sim.v0, "Money supply rate (linear)");
  sim.opts["--q"] = simulate->add_option("--q", sim.q, "Money growth rate (exponential)");
  sim.opts["--alpha"] = simulate->add_option("--alpha", sim.alpha, "Feedback exponent in (0,1) (output-power)");
  simulate->add_option("--knots", sim.knots, "CSV of t,M knots (tabulated)");
  sim.opts["--k"] = simulate->add_option("--k", sim.k, "Relaxation time constant")->capture_default_str();
  sim.opts["--W0"] = simulate->add_option("--W0", sim.w0, "Initial sales value")->capture_default_str();
  sim.opts["--Y0"] = simulate->add_option("--Y0", sim.y0, "Initial real output")->capture_default_str();
  sim.opts["--g"] = simulate->add_option("--g", sim.g, "Real output growth rate")->capture_default_str();
  sim.opts["--t-end"] = simulate->add_option("--t-end", sim.t_end, "End time")->capture_default_str();
  sim.opts["--dt"] = simulate->add_option("--dt", sim.dt, "RK4 step (default k/100; must be <= k/2)");

  // classify
  ClassifyArgs cls;
  auto* classify = app.add_subcommand("classify", "Label state migrations of an annual (q, g, c) series");
  classify->add_option("--input", cls.input, "CSV with columns period,q,g,c (percent per year)");
  classify->add_option("--fixture", cls.fixture, "Embedded data set")->check(CLI::IsMember({"china"}));
  classify->add_option("--evident-up", cls.th.evident_up, "Evident money-growth increase (pp)")->capture_default_str();
  classify->add_option("--evident-down", cls.th.evident_down, "Evident money-growth decrease (pp)")
      ->capture_default_str();
  classify->add_option("--sensitivity-ratio", cls.th.sensitivity_ratio,
                       "Economy is sensitive when q/g - 1 is below this")
      ->capture_default_str();
  classify->add_option("--sensitive-trigger", cls.th.sensitive_trigger,
                       "Money-growth change (pp) that counts as evident when sensitive")
      ->capture_default_str();
  classify->add_option("--tie-eps", cls.th.tie_eps, "Deltas within this many pp count as flat")->capture_default_str();
  classify->add_option("--slope-delta", cls.th.slope_delta, "Half-width of the slope band around -1")
      ->capture_default_str();
  classify->add_option("--max-buffer", cls.th.max_buffer_steps, "Longest accepted buffer before a double drop")
      ->capture_default_str();

  // resolve
  ResolveArgs res;
  double slope_value = 0.0;
  auto* resolve = app.add_subcommand("resolve", "Given two of money-growth direction, elasticity and behaviour, print the third");
  resolve->add_option("--q-dir", res.q_dir, "Money-growth direction: up | down | flat");
  auto* slope_opt = resolve->add_option("--slope", slope_value, "Migration slope dc/dg");
  resolve->add_option("--elasticity", res.elasticity,
                      "eq_minus_one | below_minus_one | between_minus_one_and_zero | positive");
  resolve->add_option("--behavior", res.behavior, "golden-growth | stagflation | GI | GO | LI | LO | DD | DR");
  resolve->add_option("--dg", res.dg, "Output-growth direction, separates golden growth from stagflation");
  resolve->add_option("--slope-delta", res.slope_delta, "Half-width of the slope band around -1")->capture_default_str();

  // regress
  RegressArgs reg;
  auto* regress = app.add_subcommand("regress", "Log-log regression of average inflation on average (q - g)");
  regress->add_option("--input", reg.input, "Panel CSV country,period,q,g,c");
  regress->add_option("--cache", reg.cache, "Directory of fetched indicator files");
  regress->add_option("--indicators", reg.indicators, "q=CODE,g=CODE,c=CODE (with --cache)");
  regress->add_option("--years", reg.years, "Year range FROM:TO")->capture_default_str();
  regress->add_option("--min-coverage", reg.min_coverage, "Minimum complete years per country")->capture_default_str();
  regress->add_option("--synthetic", reg.synthetic, "Generate a synthetic panel with this many countries");
  regress->add_option("--synthetic-years", reg.synthetic_years, "Years per synthetic country")->capture_default_str();
  regress->add_option("--noise", reg.noise, "Synthetic log-inflation noise sigma")->capture_default_str();
  regress->add_option("--generator-slope", reg.generator_slope, "Synthetic log-log slope")->capture_default_str();

  // fetch
  FetchArgs fet;
  auto* fetch = app.add_subcommand("fetch", "Download indicator series into a local CSV cache");
  fetch->add_option("--indicators", fet.indicators, "q=CODE,g=CODE,c=CODE (default: broad money, GDP, CPI growth)");
  fetch->add_option("--years", fet.years, "Year range FROM:TO")->capture_default_str();
  fetch->add_option("--cache", fet.cache, "Cache directory")->capture_default_str();
  fetch->add_option("--base-url", fet.base_url, "Provider base URL")->capture_default_str();
  fetch->add_option("--retries", fet.retries, "Retries per request")->capture_default_str();
  fetch->add_option("--backoff-ms", fet.backoff_ms, "Initial retry backoff")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  if (*simulate) return guarded([&] { return run_simulate(sim, global); });
  if (*classify) return guarded([&] { return run_classify(cls, global); });
  if (*resolve) {
    if (slope_opt->count() > 0) res.slope = slope_value;
    return guarded([&] { return run_resolve(res, global); });
  }
  if (*regress) return guarded([&] { return run_regress(reg, global); });
  if (*fetch) return guarded([&] { return run_fetch(fet, global); });
  return kInputError;
}
