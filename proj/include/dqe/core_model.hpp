#pragma once

// Relaxation dynamics of sales value under a prescribed money supply:
//
//     k * dW/dt = M(t) - W,     W = P * Y,     Y(t) = Y0 * exp(g t)
//
// The money supply acts as a carrying capacity for nominal sales; velocity
// W/M and inflation d(ln P)/dt come out of the solution rather than being
// assumed.

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "dqe/errors.hpp"

namespace dqe {

struct ScenarioParams {
  double k = 1.0;   // relaxation time constant, > 0
  double w0 = 1.0;  // initial sales value, > 0
  double y0 = 1.0;  // initial real output, > 0
  double g = 0.0;   // real output growth rate, any sign
};

struct ConstantSupply {
  double m0;
};

/// M(t) = v0 * t
struct LinearSupply {
  double v0;
};

/// M(t) = m0 * exp(q t)
struct ExponentialSupply {
  double m0;
  double q;
};

/// Feedback supply M = W^alpha, 0 < alpha < 1. Only meaningful in normalized units.
struct OutputPowerSupply {
  double alpha;
};

/// Piecewise-linear M(t) through strictly increasing knots; no extrapolation.
struct TabulatedSupply {
  std::vector<double> times;
  std::vector<double> values;
};

using MoneySupplySchedule =
    std::variant<ConstantSupply, LinearSupply, ExponentialSupply, OutputPowerSupply, TabulatedSupply>;

std::string schedule_name(const MoneySupplySchedule& schedule);

// Throw InputError naming the offending field.
void validate(const ScenarioParams& params);
void validate(const MoneySupplySchedule& schedule);

/// Money supply at time t. `w_current` is the current sales value and is
/// required for the feedback schedule; other schedules ignore it.
double eval_money_supply(const MoneySupplySchedule& schedule, double t,
                         std::optional<double> w_current = std::nullopt);

struct TrajectorySample {
  double t;
  double m;  // money supply
  double w;  // sales value P*Y
  double p;  // price level
  double y;  // real output
  double c;  // inflation d(ln P)/dt
  double v;  // velocity W/M (infinite when M = 0)
};

class Trajectory {
 public:
  explicit Trajectory(std::vector<TrajectorySample> samples) : samples_(std::move(samples)) {}

  std::span<const TrajectorySample> samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  const TrajectorySample& operator[](std::size_t i) const { return samples_[i]; }
  const TrajectorySample& front() const { return samples_.front(); }
  const TrajectorySample& back() const { return samples_.back(); }

 private:
  std::vector<TrajectorySample> samples_;
};

/// Raised when the integrator would need to step past a point where W <= 0.
class NonPositiveSalesError : public DomainError {
 public:
  NonPositiveSalesError(double t, const std::string& what) : DomainError(what), t_(t) {}
  double time() const { return t_; }

 private:
  double t_;
};

/// Classic RK4 at a fixed step. The final step is shortened to land on t_end.
/// Inflation is the second-order finite difference of ln P on the sample grid
/// (one-sided at both ends). Rejects dt > k/2 with DomainError.
Trajectory integrate(const MoneySupplySchedule& schedule, const ScenarioParams& params,
                     double t_end, double dt);

// Closed-form sales value W(t) for the analytic schedules.
double sales_constant(double m0, const ScenarioParams& params, double t);
double sales_linear(double v0, const ScenarioParams& params, double t);
/// Uses the limit form exp(-t/k) (W0 + M0 t / k) at kq = -1.
double sales_exponential(double m0, double q, const ScenarioParams& params, double t);

/// Dispatches to the closed forms above. InputError for feedback or tabulated schedules.
double sales_closed_form(const MoneySupplySchedule& schedule, const ScenarioParams& params, double t);

double output_at(const ScenarioParams& params, double t);

std::vector<double> price_path(const Trajectory& trajectory);
double price_closed_form(const MoneySupplySchedule& schedule, const ScenarioParams& params, double t);

/// Exact derivative of ln P for the analytic schedules. For the exponential
/// schedule the transient decays like exp(-(q + 1/k) t); the formula is written
/// through expm1 so it stays continuous across kq = -1.
double inflation_closed_form(const MoneySupplySchedule& schedule, const ScenarioParams& params, double t);

/// Inflation on an increasing time grid. Analytic schedules use the exact
/// derivative; feedback and tabulated schedules integrate at dt = k/200 and
/// interpolate the finite-difference inflation onto the grid.
std::vector<double> inflation_path(const MoneySupplySchedule& schedule, const ScenarioParams& params,
                                   std::span<const double> t_grid);

enum class RegimeBranch { typical, disordered, seesaw, resonance, undetermined };
enum class InflationSign { inflation, deflation, neutral };

std::string to_string(RegimeBranch branch);
std::string to_string(InflationSign sign);

struct LongRunRegime {
  std::optional<double> c_inf;
  RegimeBranch branch;
  std::optional<double> v_inf;
  std::optional<InflationSign> sign;
};

LongRunRegime long_run_regime(const MoneySupplySchedule& schedule, const ScenarioParams& params);

enum class DemandRegime { rigid, elastic, boundary };
std::string to_string(DemandRegime regime);

struct PriceOutputCurve {
  std::vector<double> output;
  std::vector<double> price;
  DemandRegime regime;
};

/// Price as a function of output under exponential money growth, with time
/// eliminated through Y = Y0 exp(|g| t). Requires g != 0 and q > -1/k.
PriceOutputCurve price_output_curve(double m0, double q, const ScenarioParams& params,
                                    std::span<const double> y_grid);

/// Second-order derivative of samples on a possibly non-uniform grid
/// (central inside, one-sided three-point at the ends; two-point when only
/// two samples exist).
std::vector<double> finite_difference(std::span<const double> x, std::span<const double> f);

}  // namespace dqe
