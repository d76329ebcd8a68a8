#pragma once

#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "tvps/control_spec.hpp"

namespace tvps {

struct ConstantRate {
  double value;
};

/// level + amplitude * sin(frequency * t)
struct SinusoidalRate {
  double level;
  double amplitude;
  double frequency;
};

using ArrivalRateKind = std::variant<ConstantRate, SinusoidalRate>;

/// A service rate obtained by applying a control to an arrival rate.
struct ControlledRate {
  ControlSpec control;
  ArrivalRateKind arrival;
};

/// A time-indexed, strictly positive rate (events or work per unit time).
class RateFunction {
 public:
  static RateFunction constant(double value);
  static RateFunction sinusoidal(double level, double amplitude, double frequency);
  /// Builds mu(t) = control(lambda(t)). `arrival` must itself be a constant
  /// or sinusoidal rate.
  static RateFunction controlled(const ControlSpec& control, const RateFunction& arrival);

  double operator()(double t) const;
  double lower_bound() const;
  double upper_bound() const;
  /// Present for sinusoidal rates and for controls applied to them.
  std::optional<double> period() const;

  const std::variant<ConstantRate, SinusoidalRate, ControlledRate>& kind() const { return kind_; }

 private:
  explicit RateFunction(std::variant<ConstantRate, SinusoidalRate, ControlledRate> kind);

  std::variant<ConstantRate, SinusoidalRate, ControlledRate> kind_;
};

/// Integral and inverse integral of a RateFunction.
///
/// Rates that are affine in a closed-form arrival rate (constants, sinusoids,
/// the difference-matching control) integrate analytically. Other controls
/// over a periodic arrival rate integrate by adaptive Gauss-Legendre quadrature on a
/// per-period grid cached at construction. The object is immutable afterwards.
class CumulativeRate {
 public:
  explicit CumulativeRate(RateFunction rate, double tolerance = 1e-9);

  const RateFunction& rate() const { return rate_; }
  double tolerance() const { return tolerance_; }

  /// Integral of the rate over [t1, t2]. Requires 0 <= t1 <= t2.
  double integrate(double t1, double t2) const;
  double value(double t) const { return integrate(0.0, t); }

  /// Smallest y >= origin with integrate(origin, y) >= x.
  double inverse(double x, double origin) const;

 private:
  struct Affine {
    double offset;  // rate = offset + slope * base(t)
    double slope;
    ArrivalRateKind base;
  };
  struct PeriodicGrid {
    double period;
    double cell;
    double per_period;
    std::vector<double> cumulative;  // at cell boundaries within one period
  };

  double quadrature(double a, double b) const;
  double periodic_primitive(double t) const;

  RateFunction rate_;
  double tolerance_;
  std::optional<Affine> affine_;
  std::shared_ptr<const PeriodicGrid> grid_;
};

/// Closed-form integral of an arrival-rate kind over [t1, t2].
double integrate_arrival_rate(const ArrivalRateKind& kind, double t1, double t2);

}  // namespace tvps
