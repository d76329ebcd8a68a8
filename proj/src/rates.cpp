#include "tvps/rates.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "quadrature.hpp"
#include "tvps/controls.hpp"

namespace tvps {

namespace {

constexpr int kCellsPerPeriod = 10000;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

double arrival_rate_at(const ArrivalRateKind& kind, double t) {
  return std::visit(overloaded{
                        [](const ConstantRate& c) { return c.value; },
                        [t](const SinusoidalRate& s) {
                          return s.level + s.amplitude * std::sin(s.frequency * t);
                        },
                    },
                    kind);
}

double arrival_lower(const ArrivalRateKind& kind) {
  return std::visit(overloaded{
                        [](const ConstantRate& c) { return c.value; },
                        [](const SinusoidalRate& s) { return s.level - std::abs(s.amplitude); },
                    },
                    kind);
}

double arrival_upper(const ArrivalRateKind& kind) {
  return std::visit(overloaded{
                        [](const ConstantRate& c) { return c.value; },
                        [](const SinusoidalRate& s) { return s.level + std::abs(s.amplitude); },
                    },
                    kind);
}

std::optional<double> arrival_period(const ArrivalRateKind& kind) {
  if (const auto* s = std::get_if<SinusoidalRate>(&kind); s && s->amplitude != 0.0)
    return 2.0 * std::numbers::pi / s->frequency;
  return std::nullopt;
}

}  // namespace

double integrate_arrival_rate(const ArrivalRateKind& kind, double t1, double t2) {
  const double d = t2 - t1;
  return std::visit(overloaded{
                        [d](const ConstantRate& c) { return c.value * d; },
                        [t1, t2, d](const SinusoidalRate& s) {
                          // cos(g t1) - cos(g t2) written without cancellation.
                          const double g = s.frequency;
                          return s.level * d + 2.0 * s.amplitude / g * std::sin(g * (t1 + t2) / 2.0) *
                                                   std::sin(g * d / 2.0);
                        },
                    },
                    kind);
}

RateFunction::RateFunction(std::variant<ConstantRate, SinusoidalRate, ControlledRate> kind)
    : kind_(std::move(kind)) {}

RateFunction RateFunction::constant(double value) {
  if (!(value > 0.0) || !std::isfinite(value))
    throw std::invalid_argument("constant rate must be positive and finite");
  return RateFunction(ConstantRate{value});
}

RateFunction RateFunction::sinusoidal(double level, double amplitude, double frequency) {
  if (!(level > std::abs(amplitude)))
    throw std::invalid_argument("sinusoidal rate requires level > |amplitude|");
  if (!(frequency > 0.0) || !std::isfinite(frequency))
    throw std::invalid_argument("sinusoidal rate requires a positive frequency");
  return RateFunction(SinusoidalRate{level, amplitude, frequency});
}

RateFunction RateFunction::controlled(const ControlSpec& control, const RateFunction& arrival) {
  control.validate();
  return std::visit(
      overloaded{
          [&](const ConstantRate& c) { return RateFunction(ControlledRate{control, c}); },
          [&](const SinusoidalRate& s) { return RateFunction(ControlledRate{control, s}); },
          [](const ControlledRate&) -> RateFunction {
            throw std::invalid_argument("a control must be applied to an arrival rate");
          },
      },
      arrival.kind_);
}

double RateFunction::operator()(double t) const {
  return std::visit(overloaded{
                        [t](const ConstantRate& c) { return arrival_rate_at(c, t); },
                        [t](const SinusoidalRate& s) { return arrival_rate_at(s, t); },
                        [t](const ControlledRate& c) {
                          return control_rate(arrival_rate_at(c.arrival, t), c.control);
                        },
                    },
                    kind_);
}

// Both controls are nondecreasing in lambda, so bounds map through directly.
double RateFunction::lower_bound() const {
  return std::visit(overloaded{
                        [](const ConstantRate& c) { return arrival_lower(c); },
                        [](const SinusoidalRate& s) { return arrival_lower(s); },
                        [](const ControlledRate& c) {
                          return control_rate(arrival_lower(c.arrival), c.control);
                        },
                    },
                    kind_);
}

double RateFunction::upper_bound() const {
  return std::visit(overloaded{
                        [](const ConstantRate& c) { return arrival_upper(c); },
                        [](const SinusoidalRate& s) { return arrival_upper(s); },
                        [](const ControlledRate& c) {
                          return control_rate(arrival_upper(c.arrival), c.control);
                        },
                    },
                    kind_);
}

std::optional<double> RateFunction::period() const {
  return std::visit(overloaded{
                        [](const ConstantRate&) -> std::optional<double> { return std::nullopt; },
                        [](const SinusoidalRate& s) { return arrival_period(s); },
                        [](const ControlledRate& c) {
                          if (c.control.kind == ControlKind::Constant) return std::optional<double>{};
                          return arrival_period(c.arrival);
                        },
                    },
                    kind_);
}

CumulativeRate::CumulativeRate(RateFunction rate, double tolerance)
    : rate_(std::move(rate)), tolerance_(tolerance) {
  if (!(tolerance > 0.0)) throw std::invalid_argument("quadrature tolerance must be positive");

  std::visit(overloaded{
                 [this](const ConstantRate& c) { affine_ = Affine{c.value, 0.0, ConstantRate{1.0}}; },
                 [this](const SinusoidalRate& s) { affine_ = Affine{0.0, 1.0, s}; },
                 [this](const ControlledRate& c) {
                   const ControlSpec& spec = c.control;
                   if (std::holds_alternative<ConstantRate>(c.arrival)) {
                     const double lambda = std::get<ConstantRate>(c.arrival).value;
                     affine_ = Affine{control_rate(lambda, spec), 0.0, ConstantRate{1.0}};
                     return;
                   }
                   switch (spec.kind) {
                     case ControlKind::Constant:
                       affine_ = Affine{spec.constant_rate, 0.0, ConstantRate{1.0}};
                       return;
                     case ControlKind::DifferenceMatching:
                       affine_ = Affine{spec.beta * spec.v_ps() / spec.target_s, spec.beta, c.arrival};
                       return;
                     case ControlKind::SquareRoot:
                       if (spec.v_fcfs() == 1.0) {
                         // The square root collapses: mu = beta (lambda + 1/s).
                         affine_ = Affine{spec.beta / spec.target_s, spec.beta, c.arrival};
                         return;
                       }
                       break;
                   }
                 },
             },
             rate_.kind());

  if (affine_) return;

  const auto period = rate_.period();
  if (!period) throw std::logic_error("non-affine rate without a period");
  auto grid = std::make_shared<PeriodicGrid>();
  grid->period = *period;
  grid->cell = *period / kCellsPerPeriod;
  grid->cumulative.resize(kCellsPerPeriod + 1, 0.0);
  for (int j = 0; j < kCellsPerPeriod; ++j) {
    grid->cumulative[j + 1] =
        grid->cumulative[j] + quadrature(j * grid->cell, (j + 1) * grid->cell);
  }
  grid->per_period = grid->cumulative.back();
  grid_ = std::move(grid);
}

double CumulativeRate::quadrature(double a, double b) const {
  if (b <= a) return 0.0;
  auto f = [this](double t) { return rate_(t); };
  return detail::integrate_adaptive(f, a, b, tolerance_);
}

double CumulativeRate::periodic_primitive(double t) const {
  const PeriodicGrid& g = *grid_;
  double n = std::floor(t / g.period);
  double r = t - n * g.period;
  if (r < 0.0) {
    r += g.period;
    n -= 1.0;
  } else if (r >= g.period) {
    r -= g.period;
    n += 1.0;
  }
  const int j = std::min(kCellsPerPeriod - 1, static_cast<int>(r / g.cell));
  return n * g.per_period + g.cumulative[j] + quadrature(j * g.cell, r);
}

double CumulativeRate::integrate(double t1, double t2) const {
  if (!(t1 >= 0.0) || !(t2 >= t1))
    throw std::invalid_argument("integrate requires 0 <= t1 <= t2");
  if (affine_) {
    const double base = affine_->slope == 0.0 ? 0.0 : integrate_arrival_rate(affine_->base, t1, t2);
    return affine_->offset * (t2 - t1) + affine_->slope * base;
  }
  if (t2 - t1 <= 2.0 * grid_->cell) return quadrature(t1, t2);
  return periodic_primitive(t2) - periodic_primitive(t1);
}

double CumulativeRate::inverse(double x, double origin) const {
  if (!(x >= 0.0)) throw std::invalid_argument("inverse requires x >= 0");
  if (!(origin >= 0.0)) throw std::invalid_argument("inverse requires origin >= 0");
  if (x == 0.0) return origin;
  if (affine_ && affine_->slope == 0.0) return origin + x / affine_->offset;

  double lo = origin + x / rate_.upper_bound();
  double hi = origin + x / rate_.lower_bound();
  double y = std::clamp(origin + x / rate_(origin), lo, hi);
  for (int iter = 0; iter < 100; ++iter) {
    const double f = integrate(origin, y) - x;
    if (f == 0.0) return y;
    if (f > 0.0) hi = y; else lo = y;
    double next = y - f / rate_(y);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - y);
    y = next;
    if (step <= 1e-14 * std::max(1.0, std::abs(y)) || hi - lo <= 1e-14 * std::max(1.0, std::abs(y)))
      break;
  }
  return y;
}

}  // namespace tvps
