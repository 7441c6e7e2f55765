#include "dqe/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace dqe {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Below this |1 + kq| the exponential schedule is treated as the resonant case.
constexpr double kResonanceTol = 1e-12;

std::string fmt_num(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

void require(bool ok, const std::string& field, const std::string& rule, double value) {
  if (!ok) throw InputError(field + ": must be " + rule + " (got " + fmt_num(value) + ")");
}

// (exp(a t) - 1) / a, with the a -> 0 limit.
double expm1_ratio(double a, double t) {
  if (a == 0.0) return t;
  return std::expm1(a * t) / a;
}

bool is_resonant(double q, double k) { return std::abs(1.0 + k * q) <= kResonanceTol; }

}  // namespace

std::string schedule_name(const MoneySupplySchedule& schedule) {
  return std::visit(overloaded{
                        [](const ConstantSupply&) { return std::string("constant"); },
                        [](const LinearSupply&) { return std::string("linear"); },
                        [](const ExponentialSupply&) { return std::string("exponential"); },
                        [](const OutputPowerSupply&) { return std::string("output-power"); },
                        [](const TabulatedSupply&) { return std::string("tabulated"); },
                    },
                    schedule);
}

void validate(const ScenarioParams& params) {
  require(std::isfinite(params.k) && params.k > 0.0, "k", "> 0", params.k);
  require(std::isfinite(params.w0) && params.w0 > 0.0, "W0", "> 0", params.w0);
  require(std::isfinite(params.y0) && params.y0 > 0.0, "Y0", "> 0", params.y0);
  require(std::isfinite(params.g), "g", "finite", params.g);
}

void validate(const MoneySupplySchedule& schedule) {
  std::visit(overloaded{
                 [](const ConstantSupply& s) {
                   require(std::isfinite(s.m0) && s.m0 > 0.0, "schedule.M0", "> 0", s.m0);
                 },
                 [](const LinearSupply& s) {
                   require(std::isfinite(s.v0) && s.v0 > 0.0, "schedule.V0", "> 0", s.v0);
                 },
                 [](const ExponentialSupply& s) {
                   require(std::isfinite(s.m0) && s.m0 > 0.0, "schedule.M0", "> 0", s.m0);
                   require(std::isfinite(s.q), "schedule.q", "finite", s.q);
                 },
                 [](const OutputPowerSupply& s) {
                   require(s.alpha > 0.0 && s.alpha < 1.0, "schedule.alpha", "in (0, 1)", s.alpha);
                 },
                 [](const TabulatedSupply& s) {
                   if (s.times.size() != s.values.size())
                     throw InputError("schedule.knots: times and values differ in length");
                   if (s.times.size() < 2) throw InputError("schedule.knots: at least 2 knots required");
                   for (std::size_t i = 0; i < s.times.size(); ++i) {
                     require(std::isfinite(s.times[i]), "schedule.knots.t", "finite", s.times[i]);
                     require(std::isfinite(s.values[i]) && s.values[i] > 0.0, "schedule.knots.M", "> 0",
                             s.values[i]);
                     if (i > 0)
                       require(s.times[i] > s.times[i - 1], "schedule.knots.t", "strictly increasing",
                               s.times[i]);
                   }
                 },
             },
             schedule);
}

double eval_money_supply(const MoneySupplySchedule& schedule, double t, std::optional<double> w_current) {
  if (!(t >= 0.0)) throw std::out_of_range("money supply requested at t=" + fmt_num(t) + " < 0");
  return std::visit(
      overloaded{
          [](const ConstantSupply& s) { return s.m0; },
          [t](const LinearSupply& s) { return s.v0 * t; },
          [t](const ExponentialSupply& s) { return s.m0 * std::exp(s.q * t); },
          [&w_current](const OutputPowerSupply& s) {
            if (!w_current) throw InputError("output-power schedule needs the current sales value");
            if (!(*w_current > 0.0))
              throw DomainError("output-power schedule undefined for sales value " + fmt_num(*w_current));
            return std::pow(*w_current, s.alpha);
          },
          [t](const TabulatedSupply& s) {
            if (t < s.times.front() || t > s.times.back())
              throw std::out_of_range("t=" + fmt_num(t) + " outside tabulated range [" +
                                      fmt_num(s.times.front()) + ", " + fmt_num(s.times.back()) + "]");
            auto it = std::upper_bound(s.times.begin(), s.times.end(), t);
            if (it == s.times.end()) return s.values.back();
            const auto hi = static_cast<std::size_t>(it - s.times.begin());
            const auto lo = hi - 1;
            const double frac = (t - s.times[lo]) / (s.times[hi] - s.times[lo]);
            return s.values[lo] + frac * (s.values[hi] - s.values[lo]);
          },
      },
      schedule);
}

std::vector<double> finite_difference(std::span<const double> x, std::span<const double> f) {
  if (x.size() != f.size()) throw InputError("finite_difference: size mismatch");
  const std::size_t n = x.size();
  std::vector<double> d(n, 0.0);
  if (n < 2) return d;
  if (n == 2) {
    d[0] = d[1] = (f[1] - f[0]) / (x[1] - x[0]);
    return d;
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h1 = x[i] - x[i - 1];
    const double h2 = x[i + 1] - x[i];
    d[i] = -h2 / (h1 * (h1 + h2)) * f[i - 1] + (h2 - h1) / (h1 * h2) * f[i] + h1 / (h2 * (h1 + h2)) * f[i + 1];
  }
  {
    const double h1 = x[1] - x[0];
    const double h2 = x[2] - x[1];
    d[0] = -(2.0 * h1 + h2) / (h1 * (h1 + h2)) * f[0] + (h1 + h2) / (h1 * h2) * f[1] -
           h1 / (h2 * (h1 + h2)) * f[2];
  }
  {
    const double h1 = x[n - 2] - x[n - 3];
    const double h2 = x[n - 1] - x[n - 2];
    d[n - 1] = h2 / (h1 * (h1 + h2)) * f[n - 3] - (h1 + h2) / (h1 * h2) * f[n - 2] +
               (2.0 * h2 + h1) / (h2 * (h1 + h2)) * f[n - 1];
  }
  return d;
}

Trajectory integrate(const MoneySupplySchedule& schedule, const ScenarioParams& params, double t_end,
                     double dt) {
  validate(schedule);
  validate(params);
  require(std::isfinite(t_end) && t_end > 0.0, "t_end", "> 0", t_end);
  require(std::isfinite(dt) && dt > 0.0, "dt", "> 0", dt);
  require(dt <= t_end, "dt", "<= t_end", dt);
  if (dt > params.k / 2.0)
    throw DomainError("step size dt=" + fmt_num(dt) + " exceeds k/2=" + fmt_num(params.k / 2.0) +
                      "; the relaxation would not be resolved");
  if (const auto* tab = std::get_if<TabulatedSupply>(&schedule)) {
    if (tab->times.front() > 0.0 || tab->times.back() < t_end)
      throw InputError("schedule.knots: must cover [0, t_end]");
  }

  const double k = params.k;
  auto rhs = [&](double t, double w) {
    if (!(w > 0.0)) throw NonPositiveSalesError(t, "sales value driven to " + fmt_num(w) + " at t=" + fmt_num(t));
    return (eval_money_supply(schedule, t, w) - w) / k;
  };

  auto steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
  steps = std::max<std::size_t>(steps, 1);

  std::vector<double> times(steps + 1);
  std::vector<double> sales(steps + 1);
  times[0] = 0.0;
  sales[0] = params.w0;
  for (std::size_t i = 0; i < steps; ++i) {
    const double t = times[i];
    const double t_next = (i + 1 == steps) ? t_end : static_cast<double>(i + 1) * dt;
    const double h = t_next - t;
    const double w = sales[i];
    const double k1 = rhs(t, w);
    const double k2 = rhs(t + 0.5 * h, w + 0.5 * h * k1);
    const double k3 = rhs(t + 0.5 * h, w + 0.5 * h * k2);
    const double k4 = rhs(t_next, w + h * k3);
    const double w_next = w + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!(w_next > 0.0) || !std::isfinite(w_next))
      throw NonPositiveSalesError(t_next,
                                  "sales value driven to " + fmt_num(w_next) + " at t=" + fmt_num(t_next));
    times[i + 1] = t_next;
    sales[i + 1] = w_next;
  }

  std::vector<double> log_price(times.size());
  const double log_y0 = std::log(params.y0);
  for (std::size_t i = 0; i < times.size(); ++i)
    log_price[i] = std::log(sales[i]) - log_y0 - params.g * times[i];
  const auto inflation = finite_difference(times, log_price);

  std::vector<TrajectorySample> samples;
  samples.reserve(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    const double w = sales[i];
    const double m = eval_money_supply(schedule, t, w);
    const double y = output_at(params, t);
    const double p = w / y;
    if (!(y > 0.0) || !std::isfinite(y) || !(p > 0.0) || !std::isfinite(p))
      throw DomainError("price or output left the representable range at t=" + fmt_num(t));
    const double v = m > 0.0 ? w / m : std::numeric_limits<double>::infinity();
    samples.push_back({t, m, w, p, y, inflation[i], v});
  }
  return Trajectory(std::move(samples));
}

double sales_constant(double m0, const ScenarioParams& params, double t) {
  return m0 + (params.w0 - m0) * std::exp(-t / params.k);
}

double sales_linear(double v0, const ScenarioParams& params, double t) {
  const double k = params.k;
  return v0 * (t - k) + (k * v0 + params.w0) * std::exp(-t / k);
}

double sales_exponential(double m0, double q, const ScenarioParams& params, double t) {
  // W = W0 e^{-t/k} + M0 (e^{qt} - e^{-t/k}) / (1 + kq); the bracket is
  // rewritten through expm1 while (q + 1/k) t is small so kq -> -1 is smooth.
  const double k = params.k;
  const double a = q + 1.0 / k;
  const double decay = std::exp(-t / k);
  double transfer;
  if (a * t > 1.0)
    transfer = (std::exp(q * t) - decay) / a;
  else
    transfer = decay * expm1_ratio(a, t);
  return params.w0 * decay + m0 / k * transfer;
}

double sales_closed_form(const MoneySupplySchedule& schedule, const ScenarioParams& params, double t) {
  return std::visit(overloaded{
                        [&](const ConstantSupply& s) { return sales_constant(s.m0, params, t); },
                        [&](const LinearSupply& s) { return sales_linear(s.v0, params, t); },
                        [&](const ExponentialSupply& s) { return sales_exponential(s.m0, s.q, params, t); },
                        [](const OutputPowerSupply&) -> double {
                          throw InputError("output-power schedule has no closed form; use integrate()");
                        },
                        [](const TabulatedSupply&) -> double {
                          throw InputError("tabulated schedule has no closed form; use integrate()");
                        },
                    },
                    schedule);
}

double output_at(const ScenarioParams& params, double t) { return params.y0 * std::exp(params.g * t); }

std::vector<double> price_path(const Trajectory& trajectory) {
  std::vector<double> out;
  out.reserve(trajectory.size());
  for (const auto& s : trajectory.samples()) out.push_back(s.w / s.y);
  return out;
}

double price_closed_form(const MoneySupplySchedule& schedule, const ScenarioParams& params, double t) {
  return sales_closed_form(schedule, params, t) / output_at(params, t);
}

double inflation_closed_form(const MoneySupplySchedule& schedule, const ScenarioParams& params, double t) {
  const double k = params.k;
  const double g = params.g;
  const double w0 = params.w0;
  auto checked = [&t](double num, double den) {
    if (den == 0.0 || !std::isfinite(num)) throw DomainError("inflation undefined at t=" + fmt_num(t));
    return num / den;
  };
  return std::visit(
      overloaded{
          [&](const ConstantSupply& s) {
            const double decay = std::exp(-t / k);
            return -g + checked((s.m0 - w0) * decay, k * (s.m0 - (s.m0 - w0) * decay));
          },
          [&](const LinearSupply& s) {
            const double decay = std::exp(-t / k);
            const double b = k * s.v0 + w0;
            return -g + checked(k * s.v0 - b * decay, k * (s.v0 * (t - k) + b * decay));
          },
          [&](const ExponentialSupply& s) {
            const double a = s.q + 1.0 / k;
            return -g + s.q + checked(s.m0 - a * k * w0, s.m0 * expm1_ratio(a, t) + k * w0);
          },
          [](const OutputPowerSupply&) -> double {
            throw InputError("output-power schedule has no closed form; use inflation_path()");
          },
          [](const TabulatedSupply&) -> double {
            throw InputError("tabulated schedule has no closed form; use inflation_path()");
          },
      },
      schedule);
}

std::vector<double> inflation_path(const MoneySupplySchedule& schedule, const ScenarioParams& params,
                                   std::span<const double> t_grid) {
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] > t_grid[i - 1])) throw InputError("t_grid: must be strictly increasing");
  std::vector<double> out;
  out.reserve(t_grid.size());
  if (t_grid.empty()) return out;

  const bool analytic = std::holds_alternative<ConstantSupply>(schedule) ||
                        std::holds_alternative<LinearSupply>(schedule) ||
                        std::holds_alternative<ExponentialSupply>(schedule);
  if (analytic) {
    for (double t : t_grid) out.push_back(inflation_closed_form(schedule, params, t));
    return out;
  }

  const double dt = params.k / 200.0;
  const double t_end = std::max(t_grid.back(), dt);
  const auto traj = integrate(schedule, params, t_end, dt);
  const auto samples = traj.samples();
  for (double t : t_grid) {
    auto it = std::lower_bound(samples.begin(), samples.end(), t,
                               [](const TrajectorySample& s, double v) { return s.t < v; });
    if (it == samples.end()) {
      out.push_back(samples.back().c);
    } else if (it == samples.begin() || it->t == t) {
      out.push_back(it->c);
    } else {
      const auto& hi = *it;
      const auto& lo = *(it - 1);
      const double frac = (t - lo.t) / (hi.t - lo.t);
      out.push_back(lo.c + frac * (hi.c - lo.c));
    }
  }
  return out;
}

std::string to_string(RegimeBranch branch) {
  switch (branch) {
    case RegimeBranch::typical: return "typical";
    case RegimeBranch::disordered: return "disordered";
    case RegimeBranch::seesaw: return "seesaw";
    case RegimeBranch::resonance: return "resonance";
    case RegimeBranch::undetermined: return "undetermined";
  }
  return "unknown";
}

std::string to_string(InflationSign sign) {
  switch (sign) {
    case InflationSign::inflation: return "inflation";
    case InflationSign::deflation: return "deflation";
    case InflationSign::neutral: return "neutral";
  }
  return "unknown";
}

std::string to_string(DemandRegime regime) {
  switch (regime) {
    case DemandRegime::rigid: return "rigid";
    case DemandRegime::elastic: return "elastic";
    case DemandRegime::boundary: return "boundary";
  }
  return "unknown";
}

LongRunRegime long_run_regime(const MoneySupplySchedule& schedule, const ScenarioParams& params) {
  validate(schedule);
  validate(params);
  const double k = params.k;
  const double g = params.g;

  LongRunRegime regime{std::nullopt, RegimeBranch::undetermined, std::nullopt, std::nullopt};
  if (const auto* e = std::get_if<ExponentialSupply>(&schedule)) {
    if (is_resonant(e->q, k)) {
      regime.branch = RegimeBranch::resonance;
      regime.c_inf = -g - 1.0 / k;
    } else if (e->q > -1.0 / k) {
      regime.branch = RegimeBranch::typical;
      regime.c_inf = e->q - g;
      regime.v_inf = 1.0 / (1.0 + k * e->q);
    } else {
      regime.branch = RegimeBranch::disordered;
      regime.c_inf = -g - 1.0 / k;
    }
  } else if (!std::holds_alternative<TabulatedSupply>(schedule)) {
    regime.branch = RegimeBranch::seesaw;
    regime.c_inf = -g;
    regime.v_inf = 1.0;
  }

  if (regime.c_inf) {
    const double c = *regime.c_inf;
    regime.sign = c > 0.0 ? InflationSign::inflation : (c < 0.0 ? InflationSign::deflation : InflationSign::neutral);
  }
  return regime;
}

PriceOutputCurve price_output_curve(double m0, double q, const ScenarioParams& params,
                                    std::span<const double> y_grid) {
  require(std::isfinite(m0) && m0 > 0.0, "M0", "> 0", m0);
  const double k = params.k;
  const double g = params.g;
  require(std::isfinite(k) && k > 0.0, "k", "> 0", k);
  if (g == 0.0) throw DomainError("price-output curve needs g != 0 (|g| appears in the exponents)");
  if (!(q > -1.0 / k)) throw DomainError("price-output curve needs q > -1/k");

  const double abs_g = std::abs(g);
  const double growth_term = 1.0 + k * q;
  const double transient = params.w0 - m0 + k * q * params.w0;

  PriceOutputCurve curve;
  curve.regime = q > abs_g ? DemandRegime::rigid : (q < abs_g ? DemandRegime::elastic : DemandRegime::boundary);
  curve.output.assign(y_grid.begin(), y_grid.end());
  curve.price.reserve(y_grid.size());
  for (double y : y_grid) {
    require(std::isfinite(y) && y > 0.0, "output grid", "> 0", y);
    // Y0^{-q/|g|} Y^{q/|g|} folded into (Y/Y0)^{q/|g|} to keep the powers in range.
    const double log_ratio = std::log(y / params.y0);
    const double money_part = m0 * std::exp(q / abs_g * log_ratio);
    const double transient_part = transient * std::exp(-log_ratio / (abs_g * k));
    curve.price.push_back((money_part + transient_part) / (growth_term * y));
  }
  return curve;
}

}  // namespace dqe
