#pragma once

#include <stdexcept>
#include <string>

#include "tvps/control_spec.hpp"
#include "tvps/rates.hpp"

namespace tvps {

/// Raised when a pointwise-stationary predictor is evaluated at a point
/// with traffic intensity >= 1.
class UnstableError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct VariabilityFactors {
  double fcfs;  // (ca2 + cs2) / 2
  double ps;    // (ca2 + cs2) / (1 + cs2)
};

VariabilityFactors variability_factors(double ca2, double cs2);

/// Square-root control: positive root of
/// s mu^2 - beta (s lambda + 1) mu + lambda beta^2 (1 - V_FCFS) = 0,
/// i.e. the rate at which the FCFS heavy-traffic response time equals s.
double mu_sr(double lambda, const ControlSpec& spec);

/// Difference-matching control beta (lambda + V_PS / s).
double mu_dm(double lambda, const ControlSpec& spec);

/// Rate chosen by `spec.kind` at arrival rate `lambda`.
double control_rate(double lambda, const ControlSpec& spec);

/// (beta/mu) + (beta/mu) rho/(1-rho) V_FCFS. Throws UnstableError when rho >= 1.
double predict_response_fcfs(double mu, double lambda, const ControlSpec& spec);

/// (beta/mu) V_PS / (1-rho). Throws UnstableError when rho >= 1.
double predict_response_ps(double mu, double lambda, const ControlSpec& spec);

/// Limits of the two controls as rho -> 0: (beta/s, beta V_PS / s).
struct LightTrafficRates {
  double sr;
  double dm;
};
LightTrafficRates light_traffic_constants(const ControlSpec& spec);

/// Discriminant of the square-root control at arrival rate `lambda`.
double sr_discriminant(double lambda, const ControlSpec& spec);

/// mu(t) for `spec` applied to `arrival_rate`. For the square-root control the
/// discriminant is checked over the range of lambda; a negative value raises
/// std::invalid_argument.
RateFunction make_service_rate(const ControlSpec& spec, const RateFunction& arrival_rate);

/// Formats `value` with the given number of significant digits, trailing
/// zeros removed (e.g. 6.6666.. -> "6.667").
std::string format_significant(double value, int digits);

}  // namespace tvps
