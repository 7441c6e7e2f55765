#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string output;
};

fs::path work_dir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("dqe_cli_" + std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Run dqe(const std::string& args) {
  const auto log = work_dir() / "last_output.txt";
  const std::string cmd = std::string(DQE_BIN) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(log)};
}

fs::path out(const std::string& name) { return work_dir() / name; }

json load_json(const fs::path& p) { return json::parse(slurp(p)); }

void write_file(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

}  // namespace

TEST_CASE("simulate: exponential schedule reports the typical branch") {
  const auto dir = out("sim_exp");
  const auto r = dqe("--out-dir " + dir.string() +
                     " simulate --schedule exponential --M0 100 --q 0.1 --k 1 --W0 50 --Y0 10 --g 0.03 --t-end 100 --dt 0.01");
  REQUIRE(r.code == 0);
  const auto regime = load_json(dir / "regime.json");
  CHECK(regime["branch"] == "typical");
  CHECK(regime["c_inf"].get<double>() == doctest::Approx(0.07).epsilon(1e-12));
  CHECK(regime["simulated"]["c_end"].get<double>() == doctest::Approx(0.07).epsilon(1e-6));
  CHECK(slurp(dir / "trajectory.csv").rfind("t,M,W,P,Y,c,v\n", 0) == 0);
  const auto manifest = load_json(dir / "manifest.json");
  CHECK(manifest["subcommand"] == "simulate");
  CHECK(manifest["parameters"]["k"] == 1.0);
  CHECK(manifest["outputs"].size() == 2);
}

TEST_CASE("simulate: step-size guard and input errors") {
  auto r = dqe("--out-dir " + out("sim_dt").string() + " simulate --schedule constant --M0 1 --k 1 --dt 0.8");
  CHECK(r.code == 3);
  CHECK(r.output.find("dt") != std::string::npos);

  r = dqe("--out-dir " + out("sim_bad").string() + " simulate --schedule exponential --M0 100 --k 1");
  CHECK(r.code == 2);
  CHECK(r.output.find("q") != std::string::npos);

  r = dqe("--out-dir " + out("sim_bad").string() + " simulate --schedule constant --M0 -5");
  CHECK(r.code == 2);
  CHECK(r.output.find("M0") != std::string::npos);

  const auto cfg = out("bad_config.json");
  write_file(cfg, R"({"schedule":{"type":"linear"},"k":1,"W0":1,"Y0":1,"t_end":5})");
  r = dqe("--out-dir " + out("sim_cfg").string() + " simulate --config " + cfg.string());
  CHECK(r.code == 2);
  CHECK(r.output.find("schedule.V0") != std::string::npos);

  r = dqe("simulate --config /nonexistent.json");
  CHECK(r.code == 2);
}

TEST_CASE("simulate: equilibrium start stays put") {
  const auto dir = out("sim_eq");
  REQUIRE(dqe("--out-dir " + dir.string() + " simulate --schedule constant --M0 100 --W0 100 --k 1 --t-end 10").code == 0);
  std::istringstream in(slurp(dir / "trajectory.csv"));
  std::string line;
  std::getline(in, line);
  int rows = 0;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string t, m, w;
    std::getline(ss, t, ',');
    std::getline(ss, m, ',');
    std::getline(ss, w, ',');
    CHECK(std::stod(w) == 100.0);
    ++rows;
  }
  CHECK(rows == 1001);
}

TEST_CASE("simulate: config file with flag override and tabulated knots") {
  const auto cfg = out("cfg.json");
  write_file(cfg, R"({"schedule":{"type":"constant","M0":100},"k":1,"W0":50,"Y0":10,"g":0.03,"t_end":20,"dt":0.01})");
  const auto dir = out("sim_cfg_ok");
  REQUIRE(dqe("--out-dir " + dir.string() + " simulate --config " + cfg.string() + " --g 0.05").code == 0);
  const auto regime = load_json(dir / "regime.json");
  CHECK(regime["branch"] == "seesaw");
  CHECK(regime["c_inf"].get<double>() == doctest::Approx(-0.05));
  const auto manifest = load_json(dir / "manifest.json");
  REQUIRE(manifest["inputs"].size() == 1);
  CHECK(manifest["inputs"][0]["sha256"].get<std::string>().size() == 64);

  const auto knots = out("knots.csv");
  write_file(knots, "t,M\n0,10\n5,20\n10,20\n");
  const auto tdir = out("sim_tab");
  REQUIRE(dqe("--out-dir " + tdir.string() + " simulate --schedule tabulated --knots " + knots.string() +
              " --k 1 --W0 10 --t-end 10")
              .code == 0);
  CHECK(load_json(tdir / "regime.json")["branch"] == "undetermined");
  CHECK(dqe("--out-dir " + tdir.string() + " simulate --schedule tabulated --knots " + knots.string() +
            " --k 1 --W0 10 --t-end 11")
            .code == 2);
}

TEST_CASE("classify: China fixture") {
  const auto dir = out("cls");
  REQUIRE(dqe("--out-dir " + dir.string() + " classify --fixture china").code == 0);
  const auto spectrum = load_json(dir / "spectrum.json");
  std::vector<std::string> tags;
  for (const auto& p : spectrum["periods"]) tags.push_back(p["tag"]);
  const std::vector<std::string> want{"DR", "DR", "DR", "RNC", "RNC", "DR", "RNC", "DD",
                                      "DR", "RNC", "DD", "DD", "DD", "DD", "RNC"};
  CHECK(tags == want);
  CHECK(spectrum["buffers"].size() == 2);

  const auto table = dqe("--out-dir " + dir.string() + " --format table classify --fixture china");
  REQUIRE(table.code == 0);
  const auto row = table.output.find("2004->2005");
  REQUIRE(row != std::string::npos);
  const auto eol = table.output.find('\n', row);
  CHECK(table.output.substr(row, eol - row).find("-1.615") != std::string::npos);

  CHECK(dqe("--out-dir " + dir.string() + " classify --fixture china --format csv").code == 0);
  CHECK(fs::exists(dir / "spectrum.csv"));
}

TEST_CASE("classify: global flags after the subcommand") {
  const auto dir = out("cls_after");
  CHECK(dqe("classify --fixture china --out-dir " + dir.string()).code == 0);
  CHECK(fs::exists(dir / "spectrum.json"));
}

TEST_CASE("classify: degenerate and malformed inputs") {
  const auto flat = out("flat.csv");
  write_file(flat, "period,q,g,c\n2001,10,5,3\n2002,10,5,3\n");
  const auto dir = out("cls_flat");
  REQUIRE(dqe("--out-dir " + dir.string() + " classify --input " + flat.string()).code == 0);
  const auto spectrum = load_json(dir / "spectrum.json");
  CHECK(spectrum["labels"].empty());
  REQUIRE(spectrum["notes"].size() == 1);
  CHECK(spectrum["notes"][0].get<std::string>().rfind("degenerate-flat", 0) == 0);

  const auto bad = out("bad.csv");
  write_file(bad, "period,q,g\n2001,10,5\n");
  CHECK(dqe("--out-dir " + dir.string() + " classify --input " + bad.string()).code == 2);
  write_file(bad, "period,q,g,c\n2001,10,five,3\n2002,1,2,3\n");
  CHECK(dqe("--out-dir " + dir.string() + " classify --input " + bad.string()).code == 2);
  CHECK(dqe("--out-dir " + dir.string() + " classify").code == 2);
  CHECK(dqe("--out-dir " + dir.string() + " classify --fixture china --tie-eps -1").code == 2);
}

TEST_CASE("classify: runs are reproducible") {
  const auto a = out("rep_a"), b = out("rep_b");
  REQUIRE(dqe("--out-dir " + a.string() + " classify --fixture china").code == 0);
  REQUIRE(dqe("--out-dir " + b.string() + " classify --fixture china").code == 0);
  CHECK(slurp(a / "spectrum.json") == slurp(b / "spectrum.json"));
  auto ma = load_json(a / "manifest.json"), mb = load_json(b / "manifest.json");
  ma.erase("outputs");
  mb.erase("outputs");
  CHECK(ma == mb);
}

TEST_CASE("resolve") {
  const auto dir = out("res");
  auto r = dqe("--out-dir " + dir.string() + " --format table resolve --q-dir up --slope 0.5");
  CHECK(r.code == 0);
  CHECK(r.output.find("DR") != std::string::npos);

  r = dqe("--out-dir " + dir.string() + " resolve --q-dir flat --slope -1 --dg up");
  CHECK(r.code == 0);
  CHECK(load_json(dir / "resolve.json")["behavior"] == "golden_growth");

  r = dqe("--out-dir " + dir.string() + " resolve --q-dir down --slope -2.5");
  CHECK(r.code == 0);
  CHECK(load_json(dir / "resolve.json")["behavior_name"] == "LO");

  r = dqe("--out-dir " + dir.string() + " resolve --behavior GI --slope -2");
  CHECK(r.code == 0);
  CHECK(load_json(dir / "resolve.json")["q_direction"] == "up");

  r = dqe("--out-dir " + dir.string() + " resolve --q-dir flat --slope 0.5");
  CHECK(r.code == 2);
  CHECK(r.output.find("no matching row") != std::string::npos);
}

TEST_CASE("regress") {
  const auto dir = out("reg");
  REQUIRE(dqe("--out-dir " + dir.string() + " regress --synthetic 161").code == 0);
  auto j = load_json(dir / "regression.json");
  CHECK(j["slope"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(j["correlation"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(slurp(dir / "scatter.csv").rfind("country,gap,avg_c,log_gap,log_c\n", 0) == 0);

  REQUIRE(dqe("--out-dir " + dir.string() + " --seed 9 regress --synthetic 161 --noise 0.3").code == 0);
  j = load_json(dir / "regression.json");
  CHECK(std::fabs(j["slope"].get<double>() - 1.0) <= 3 * j["slope_stderr"].get<double>());
  CHECK(load_json(dir / "manifest.json")["parameters"]["seed"] == 9);

  const auto panel = out("panel.csv");
  write_file(panel, "country,period,q,g,c\nA,2000,10,2,8\nA,2001,10,2,8\nB,2000,10,2,-1\nB,2001,10,2,-1\n");
  const auto r = dqe("--out-dir " + dir.string() + " regress --input " + panel.string() + " --min-coverage 2");
  CHECK(r.code == 4);
  CHECK(dqe("--out-dir " + dir.string() + " regress").code == 2);
  CHECK(dqe("--out-dir " + dir.string() + " regress --synthetic 10 --years 2000").code == 2);
}

TEST_CASE("fetch reports network failure") {
  const auto r = dqe("--out-dir " + out("fetch").string() + " fetch --cache " + out("fetch_cache").string() +
                     " --base-url http://127.0.0.1:1/v2 --retries 0 --backoff-ms 1");
  CHECK(r.code == 5);
  CHECK(r.output.find("network") != std::string::npos);
}

TEST_CASE("help documents threshold defaults") {
  const auto r = dqe("classify --help");
  CHECK(r.code == 0);
  for (const char* s : {"--evident-up FLOAT [3]", "--evident-down FLOAT [4]", "[0.35]", "--sensitive-trigger FLOAT [1]",
                        "--tie-eps FLOAT [0.05]", "--slope-delta FLOAT [0.1]", "--max-buffer UINT [2]"})
    CHECK_MESSAGE(r.output.find(s) != std::string::npos, s);
  for (const char* sub : {"simulate", "resolve", "regress", "fetch"}) CHECK(dqe(std::string(sub) + " --help").code == 0);
  CHECK(dqe("--bogus").code == 2);
  CHECK(dqe("").code == 2);
}
