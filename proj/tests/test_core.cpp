#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include <json.hpp>

#include "dqe/core_io.hpp"
#include "dqe/core_model.hpp"
#include "oracles.hpp"

using namespace dqe;

namespace {

ScenarioParams params(double k, double w0, double y0 = 1.0, double g = 0.0) { return {k, w0, y0, g}; }

double max_rel_error(const Trajectory& tr, auto&& exact) {
  double worst = 0.0;
  for (const auto& s : tr.samples()) worst = std::max(worst, oracle::rel_err(s.w, exact(s.t)));
  return worst;
}

}  // namespace

TEST_CASE("money supply evaluation") {
  CHECK(eval_money_supply(ExponentialSupply{100, 0}, 5) == doctest::Approx(100).epsilon(1e-15));
  CHECK(eval_money_supply(LinearSupply{10}, 0) == 0.0);
  CHECK(oracle::rel_err(eval_money_supply(ExponentialSupply{100, 0.1}, 10), 271.828182845904523536L) < 1e-14);
  CHECK(eval_money_supply(OutputPowerSupply{0.5}, 3, 16.0) == doctest::Approx(4.0));
  CHECK_THROWS_AS(eval_money_supply(OutputPowerSupply{0.5}, 3), InputError);

  const TabulatedSupply tab{{0, 1, 3}, {10, 20, 40}};
  CHECK(eval_money_supply(tab, 0.5) == doctest::Approx(15));
  CHECK(eval_money_supply(tab, 2) == doctest::Approx(30));
  CHECK(eval_money_supply(tab, 3) == doctest::Approx(40));
  CHECK_THROWS_AS(eval_money_supply(tab, 3.5), std::out_of_range);
  CHECK_THROWS_AS(eval_money_supply(ConstantSupply{1}, -1), std::out_of_range);
}

TEST_CASE("schedule and parameter validation") {
  CHECK_THROWS_AS(validate(ScenarioParams{0, 1, 1, 0}), InputError);
  CHECK_THROWS_AS(validate(ScenarioParams{1, -1, 1, 0}), InputError);
  CHECK_THROWS_AS(validate(ScenarioParams{1, 1, 0, 0}), InputError);
  CHECK_NOTHROW(validate(ScenarioParams{1, 1, 1, -0.5}));
  CHECK_THROWS_AS(validate(MoneySupplySchedule{ConstantSupply{0}}), InputError);
  CHECK_THROWS_AS(validate(MoneySupplySchedule{LinearSupply{-1}}), InputError);
  CHECK_THROWS_AS(validate(MoneySupplySchedule{OutputPowerSupply{1.0}}), InputError);
  CHECK_THROWS_AS(validate(MoneySupplySchedule{TabulatedSupply{{0}, {1}}}), InputError);
  CHECK_THROWS_AS(validate(MoneySupplySchedule{TabulatedSupply{{0, 0}, {1, 2}}}), InputError);
  CHECK_THROWS_AS(validate(MoneySupplySchedule{TabulatedSupply{{0, 1}, {1, 0}}}), InputError);
}

TEST_CASE("integrate: constant supply") {
  const auto tr = integrate(ConstantSupply{100}, params(1, 50, 10), 1.0, 0.01);
  CHECK(tr.back().t == 1.0);
  CHECK(oracle::rel_err(tr.back().w, 81.6060279414278839L) <= 1e-8);

  const auto eq = integrate(ConstantSupply{100}, params(1, 100), 20.0, 0.01);
  for (const auto& s : eq.samples()) CHECK(s.w == 100.0);
}

TEST_CASE("integrate: output-power feedback settles at one") {
  const auto tr = integrate(OutputPowerSupply{0.5}, params(1, 4), 60.0, 0.01);
  CHECK(std::fabs(tr.back().w - 1.0) < 1e-9);
  for (std::size_t i = 1; i < tr.size(); ++i) CHECK(tr[i].w < tr[i - 1].w);
}

TEST_CASE("integrate: guards") {
  CHECK_THROWS_AS(integrate(ConstantSupply{1}, params(1, 1), 10.0, 0.6), DomainError);
  CHECK_NOTHROW(integrate(ConstantSupply{1}, params(1, 1), 10.0, 0.5));
  CHECK_THROWS_AS(integrate(ConstantSupply{1}, params(1, 1), 0.0, 0.1), InputError);
  CHECK_THROWS_AS(integrate(ConstantSupply{1}, params(1, 1), 1.0, 2.0), InputError);
  CHECK_THROWS_AS(integrate(TabulatedSupply{{0, 1}, {1, 1}}, params(1, 1), 2.0, 0.1), InputError);
}

TEST_CASE("trajectory invariants") {
  const auto tr = integrate(ExponentialSupply{100, 0.05}, params(2, 30, 4, 0.03), 40.0, 0.02);
  for (std::size_t i = 0; i < tr.size(); ++i) {
    const auto& s = tr[i];
    if (i > 0) CHECK(s.t > tr[i - 1].t);
    CHECK(s.w > 0);
    CHECK(s.p > 0);
    CHECK(s.y > 0);
    CHECK(oracle::rel_err(s.v, static_cast<long double>(s.w) / s.m) <= 1e-12);
    CHECK(oracle::rel_err(s.p * s.y, s.w) <= 1e-12);
  }
  CHECK(tr.front().p == doctest::Approx(7.5));
}

TEST_CASE("closed forms: constant supply") {
  const auto p = params(1, 50);
  CHECK(sales_constant(100, p, 0) == 50.0);
  CHECK(sales_constant(100, p, 1e4) == doctest::Approx(100).epsilon(1e-15));
  CHECK(oracle::rel_err(sales_constant(100, p, 1), 81.6060279414278839L) < 1e-14);
}

TEST_CASE("closed forms: linear supply") {
  const auto p = params(2, 0);
  CHECK(sales_linear(10, p, 0) == doctest::Approx(0).epsilon(1e-14));
  CHECK(oracle::rel_err(sales_linear(10, p, 2), 7.35758882342884643L) < 1e-14);
  CHECK(sales_linear(10, p, 1000) / eval_money_supply(LinearSupply{10}, 1000) == doctest::Approx(0.998).epsilon(1e-12));
}

TEST_CASE("closed forms: exponential supply") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 50.0);
  for (int i = 0; i < 50; ++i) {
    const double t = u(rng);
    const auto p = params(1.5, 40);
    CHECK(sales_exponential(100, 0.0, p, t) == doctest::Approx(sales_constant(100, p, t)).epsilon(1e-14));
  }
  CHECK(sales_exponential(100, 0.1, params(1, 50), 0) == doctest::Approx(50).epsilon(1e-15));
  const double w = sales_exponential(100, 0.1, params(1, 50), 300);
  CHECK(w / eval_money_supply(ExponentialSupply{100, 0.1}, 300) == doctest::Approx(1.0 / 1.1).epsilon(1e-12));
}

TEST_CASE("closed forms: resonance is continuous in q") {
  const double k = 2.0;
  const auto p = params(k, 30);
  for (double t : {0.5, 3.0, 10.0, 40.0}) {
    const double at = sales_exponential(20, -1.0 / k, p, t);
    CHECK(oracle::rel_err(at, std::exp(-t / k) * (30 + 20 * t / k)) < 1e-13);
    CHECK(sales_exponential(20, -1.0 / k + 1e-9, p, t) == doctest::Approx(at).epsilon(1e-7));
    CHECK(sales_exponential(20, -1.0 / k - 1e-9, p, t) == doctest::Approx(at).epsilon(1e-7));
  }
}

TEST_CASE("closed forms agree with the reference solutions") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uk(0.1, 10), uq(-2, 1), um(1, 1000), ut(0, 30);
  for (int i = 0; i < 200; ++i) {
    const double k = uk(rng), q = uq(rng), m0 = um(rng), w0 = um(rng), t = ut(rng);
    const auto p = params(k, w0);
    CHECK(oracle::rel_err(sales_constant(m0, p, t), oracle::sales_constant(m0, k, w0, t)) < 1e-12);
    CHECK(oracle::rel_err(sales_linear(m0, p, t), oracle::sales_linear(m0, k, w0, t)) < 1e-10);
    CHECK(oracle::rel_err(sales_exponential(m0, q, p, t), oracle::sales_exponential(m0, q, k, w0, t)) < 1e-10);
  }
}

TEST_CASE("price path") {
  for (const MoneySupplySchedule& s : {MoneySupplySchedule{ConstantSupply{100}}, MoneySupplySchedule{LinearSupply{3}},
                                       MoneySupplySchedule{ExponentialSupply{100, 0.2}}}) {
    const auto tr = integrate(s, params(1, 50, 10, 0.02), 1.0, 0.01);
    CHECK(price_path(tr).front() == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(price_closed_form(s, params(1, 50, 10, 0.02), 0) == doctest::Approx(5.0).epsilon(1e-15));
  }
  const auto p = params(1, 50, 10, 0.02);
  CHECK(oracle::rel_err(price_closed_form(ConstantSupply{100}, p, 1), 7.99901203220216153L) < 1e-13);
  const auto tr = integrate(ConstantSupply{100}, p, 1.0, 0.01);
  CHECK(oracle::rel_err(price_path(tr).back(), 7.99901203220216153L) < 1e-8);
  CHECK(price_closed_form(ConstantSupply{100}, p, 2000) < 1e-15);
}

TEST_CASE("inflation: long-run limits") {
  const std::vector<double> late{5000.0};
  CHECK(inflation_path(ConstantSupply{100}, params(1, 50, 1, 0.03), late)[0] == doctest::Approx(-0.03).epsilon(1e-12));
  CHECK(inflation_path(ExponentialSupply{100, 0.1}, params(1, 50, 1, 0.03), late)[0] ==
        doctest::Approx(0.07).epsilon(1e-12));
  CHECK(inflation_path(ExponentialSupply{100, -2}, params(1, 50, 1, 0.5), std::vector<double>{200.0})[0] ==
        doctest::Approx(-1.5).epsilon(1e-10));
  CHECK(inflation_path(LinearSupply{5}, params(1, 50, 1, 0.03), late)[0] == doctest::Approx(-0.03 + 1.0 / 4999).epsilon(1e-6));
}

TEST_CASE("inflation: closed forms match a five-point derivative of the price") {
  struct Case {
    MoneySupplySchedule s;
    ScenarioParams p;
  };
  const std::vector<Case> cases{
      {ConstantSupply{100}, params(1, 50, 10, 0.03)},
      {ConstantSupply{20}, params(3, 80, 1, -0.1)},
      {LinearSupply{10}, params(2, 5, 1, 0.02)},
      {ExponentialSupply{100, 0.1}, params(1, 50, 1, 0.03)},
      {ExponentialSupply{10, -0.5}, params(2, 7, 1, 0.01)},  // resonance
      {ExponentialSupply{10, -2}, params(1, 7, 1, 0.5)},
  };
  for (const auto& c : cases) {
    for (double t : {0.3, 1.0, 2.5, 6.0}) {
      const auto price = [&](long double s) { return static_cast<long double>(price_closed_form(c.s, c.p, static_cast<double>(s))); };
      const double fd = static_cast<double>(oracle::log_derivative(price, t, 1e-3L));
      CHECK(inflation_closed_form(c.s, c.p, t) == doctest::Approx(fd).epsilon(1e-7));
    }
  }
}

TEST_CASE("inflation: exponential formula differentiates the price, the g-exponent variant does not") {
  const double m0 = 100, q = 0.1, k = 1, w0 = 50, y0 = 10, g = 0.03;
  const auto p = params(k, w0, y0, g);
  for (double t : {0.5, 1.0, 2.0, 4.0}) {
    const auto price = [&](long double s) { return oracle::price_exponential(m0, q, k, w0, y0, g, s); };
    const long double fd = oracle::log_derivative(price, t, 1e-3L);
    const long double derived = oracle::inflation_exponential(m0, q, k, w0, g, t, q + 1 / k);
    const long double g_variant = oracle::inflation_exponential(m0, q, k, w0, g, t, g + 1 / k);
    CHECK(std::fabs(static_cast<double>(derived - fd)) < 1e-9);
    CHECK(std::fabs(static_cast<double>(g_variant - fd)) > 1e-4);
    CHECK(oracle::rel_err(inflation_closed_form(ExponentialSupply{m0, q}, p, t), derived) < 1e-12);
  }
}

TEST_CASE("inflation: finite differences on the trajectory converge at second order") {
  const MoneySupplySchedule s = ExponentialSupply{100, 0.3};
  const auto p = params(1, 50, 2, 0.02);
  auto max_err = [&](double dt) {
    const auto tr = integrate(s, p, 5.0, dt);
    double worst = 0.0;
    for (const auto& x : tr.samples()) worst = std::max(worst, std::fabs(x.c - inflation_closed_form(s, p, x.t)));
    return worst;
  };
  const double e1 = max_err(0.05), e2 = max_err(0.025), e3 = max_err(0.0125);
  CHECK(std::log2(e1 / e2) >= 1.9);
  CHECK(std::log2(e2 / e3) >= 1.9);
}

TEST_CASE("finite difference helper") {
  const std::vector<double> x{0, 0.5, 1.5, 2, 3.5};
  std::vector<double> f;
  for (double v : x) f.push_back(3 * v * v - v + 2);
  const auto d = finite_difference(x, f);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(d[i] == doctest::Approx(6 * x[i] - 1).epsilon(1e-12));
  const auto two = finite_difference(std::vector<double>{0, 2}, std::vector<double>{1, 5});
  CHECK(two[0] == doctest::Approx(2));
  CHECK(two[1] == doctest::Approx(2));
}

TEST_CASE("integrator matches closed forms on random scenarios") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> uk(0.1, 10), ug(-0.2, 0.2), uq(-2, 1), um(1, 1000);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double k = uk(rng), g = ug(rng), q = uq(rng), m0 = um(rng), v0 = um(rng), w0 = um(rng);
    const auto p = params(k, w0, 1, g);
    const double t_end = 5 * k, dt = k / 100;
    worst = std::max(worst, max_rel_error(integrate(ConstantSupply{m0}, p, t_end, dt),
                                          [&](double t) { return oracle::sales_constant(m0, k, w0, t); }));
    worst = std::max(worst, max_rel_error(integrate(LinearSupply{v0}, p, t_end, dt),
                                          [&](double t) { return oracle::sales_linear(v0, k, w0, t); }));
    worst = std::max(worst, max_rel_error(integrate(ExponentialSupply{m0, q}, p, t_end, dt),
                                          [&](double t) { return oracle::sales_exponential(m0, q, k, w0, t); }));
  }
  MESSAGE("worst relative error " << worst);
  CHECK(worst <= 1e-6);
}

TEST_CASE("constant supply relaxes monotonically without overshoot") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> uk(0.1, 10), um(1, 1000);
  for (int i = 0; i < 50; ++i) {
    const double k = uk(rng), m0 = um(rng), w0 = um(rng);
    const auto tr = integrate(ConstantSupply{m0}, params(k, w0), 10 * k, k / 100);
    const double side = w0 - m0;
    for (std::size_t j = 1; j < tr.size(); ++j) {
      const double prev = tr[j - 1].w, cur = tr[j].w;
      if (side > 0) {
        CHECK(cur < prev);
        CHECK(cur > m0);
      } else {
        CHECK(cur > prev);
        CHECK(cur < m0);
      }
    }
  }
}

TEST_CASE("velocity tends to 1/(1+kq) or 1") {
  for (auto [k, q] : {std::pair{1.0, 0.1}, std::pair{2.0, -0.3}, std::pair{0.5, 0.8}}) {
    const double T = 50 * std::max(k, 1 / std::fabs(q + 1 / k));
    const auto tr = integrate(ExponentialSupply{10, q}, params(k, 3), T, k / 100);
    CHECK(std::fabs(tr.back().v - 1 / (1 + k * q)) < 1e-4);
  }
  CHECK(std::fabs(integrate(ConstantSupply{10}, params(2, 3), 200, 0.02).back().v - 1) < 1e-3);
  CHECK(std::fabs(integrate(LinearSupply{10}, params(2, 3), 4000, 0.02).back().v - 1) < 1e-3);
  CHECK(std::fabs(integrate(OutputPowerSupply{0.3}, params(2, 3), 200, 0.02).back().v - 1) < 1e-3);
}

TEST_CASE("long-run regime") {
  auto r = long_run_regime(ExponentialSupply{1, 0.05}, params(1, 1, 1, 0.02));
  CHECK(r.branch == RegimeBranch::typical);
  CHECK(*r.c_inf == doctest::Approx(0.03).epsilon(1e-15));
  CHECK(*r.sign == InflationSign::inflation);
  CHECK(*r.v_inf == doctest::Approx(1 / 1.05));

  r = long_run_regime(ExponentialSupply{1, 0.02}, params(1, 1, 1, 0.05));
  CHECK(r.branch == RegimeBranch::typical);
  CHECK(*r.c_inf == doctest::Approx(-0.03));
  CHECK(*r.sign == InflationSign::deflation);

  r = long_run_regime(ExponentialSupply{1, -2}, params(1, 1, 1, -1.5));
  CHECK(r.branch == RegimeBranch::disordered);
  CHECK(*r.c_inf == 0.5);
  CHECK(!r.v_inf);

  r = long_run_regime(ExponentialSupply{1, -0.5}, params(2, 1, 1, 0.1));
  CHECK(r.branch == RegimeBranch::resonance);
  CHECK(*r.c_inf == doctest::Approx(-0.6));

  for (const MoneySupplySchedule& s : {MoneySupplySchedule{ConstantSupply{1}}, MoneySupplySchedule{LinearSupply{1}},
                                       MoneySupplySchedule{OutputPowerSupply{0.5}}}) {
    r = long_run_regime(s, params(1, 1, 1, 0.03));
    CHECK(r.branch == RegimeBranch::seesaw);
    CHECK(*r.c_inf == -0.03);
    CHECK(*r.v_inf == 1.0);
  }
  r = long_run_regime(ExponentialSupply{1, 0.03}, params(1, 1, 1, 0.03));
  CHECK(*r.sign == InflationSign::neutral);

  r = long_run_regime(TabulatedSupply{{0, 1}, {1, 2}}, params(1, 1));
  CHECK(r.branch == RegimeBranch::undetermined);
  CHECK(!r.c_inf);
}

TEST_CASE("price-output curve") {
  std::vector<double> ys;
  for (int i = 0; i <= 40; ++i) ys.push_back(std::pow(10.0, 1 + 0.1 * i));

  const auto rigid = price_output_curve(100, 0.10, params(1, 50, 10, 0.04), ys);
  CHECK(rigid.regime == DemandRegime::rigid);
  CHECK(rigid.price.back() > rigid.price[rigid.price.size() - 2]);

  const auto elastic = price_output_curve(100, 0.02, params(1, 50, 10, 0.05), ys);
  CHECK(elastic.regime == DemandRegime::elastic);
  CHECK(elastic.price.back() < elastic.price[elastic.price.size() - 2]);

  CHECK(price_output_curve(100, 0.05, params(1, 50, 10, -0.05), ys).regime == DemandRegime::boundary);
  CHECK_THROWS_AS(price_output_curve(100, 0.05, params(1, 50, 10, 0.0), ys), DomainError);
  CHECK_THROWS_AS(price_output_curve(100, -2, params(1, 50, 10, 0.05), ys), DomainError);
}

TEST_CASE("price-output curve agrees with the price path for growing output") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> uk(0.2, 5), ug(0.005, 0.2), uq(-0.15, 1), um(1, 1000), ut(0, 40);
  for (int i = 0; i < 100; ++i) {
    const double k = uk(rng), g = ug(rng), q = std::max(uq(rng), -0.9 / k), m0 = um(rng), w0 = um(rng);
    const auto p = params(k, w0, 7, g);
    const double t = ut(rng);
    const std::vector<double> y{output_at(p, t)};
    const auto curve = price_output_curve(m0, q, p, y);
    CHECK(oracle::rel_err(curve.price[0], oracle::price_exponential(m0, q, k, w0, 7, g, t)) < 1e-8);
  }
}

TEST_CASE("scenario config parsing") {
  auto doc = nlohmann::json::parse(R"({"schedule":{"type":"exponential","M0":100,"q":0.1},"k":2,"W0":50,"Y0":10,"g":0.03,"t_end":40})");
  const auto cfg = parse_scenario_config(doc);
  CHECK(std::holds_alternative<ExponentialSupply>(cfg.schedule));
  CHECK(cfg.params.k == 2);
  CHECK(cfg.dt == doctest::Approx(0.02));
  CHECK(cfg.t_end == 40);

  doc["schedule"].erase("M0");
  try {
    parse_scenario_config(doc);
    FAIL("expected InputError");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("schedule.M0") != std::string::npos);
  }

  auto bad = nlohmann::json::parse(R"({"schedule":{"type":"constant","M0":1},"k":-1,"W0":1,"Y0":1,"t_end":5})");
  try {
    parse_scenario_config(bad);
    FAIL("expected InputError");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find('k') != std::string::npos);
  }

  auto tab = nlohmann::json::parse(R"({"schedule":{"type":"tabulated","t":[0,1,2],"M":[1,2,3]},"k":1,"W0":1,"Y0":1,"t_end":2})");
  CHECK(std::holds_alternative<TabulatedSupply>(parse_scenario_config(tab).schedule));
  CHECK(scenario_to_json(parse_scenario_config(tab))["schedule"]["type"] == "tabulated");
}

TEST_CASE("trajectory csv") {
  const auto tr = integrate(ConstantSupply{100}, params(1, 50, 10), 0.02, 0.01);
  std::ostringstream out;
  write_trajectory_csv(out, tr);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,M,W,P,Y,c,v");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 3);
  CHECK(out.str().find("50,") != std::string::npos);
}

TEST_CASE("integration over a tabulated schedule follows the knots") {
  const TabulatedSupply tab{{0, 10, 20}, {100, 100, 100}};
  const auto tr = integrate(tab, params(1, 50), 20, 0.01);
  CHECK(oracle::rel_err(tr.back().w, oracle::sales_constant(100, 1, 50, 20)) < 1e-9);
  const auto c = inflation_path(tab, params(1, 50, 1, 0.02), std::vector<double>{0.0, 5.0, 20.0});
  CHECK(c.size() == 3);
  CHECK(c[2] == doctest::Approx(-0.02).epsilon(1e-6));
}
