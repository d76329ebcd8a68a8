#include "tvps/controls.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>

namespace tvps {

std::string to_string(ControlKind kind) {
  switch (kind) {
    case ControlKind::SquareRoot: return "sr";
    case ControlKind::DifferenceMatching: return "dm";
    case ControlKind::Constant: return "const";
  }
  return "unknown";
}

ControlKind parse_control(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "sr") return ControlKind::SquareRoot;
  if (lower == "dm") return ControlKind::DifferenceMatching;
  if (lower == "const" || lower == "constant") return ControlKind::Constant;
  throw std::invalid_argument("unknown control '" + std::string(name) + "' (expected sr|dm|const)");
}

void ControlSpec::validate() const {
  if (!(target_s > 0.0)) throw std::invalid_argument("control target_s must be positive");
  if (!(beta > 0.0)) throw std::invalid_argument("control beta must be positive");
  if (!(ca2 > 0.0) || !(cs2 > 0.0)) throw std::invalid_argument("control SCVs must be positive");
  if (kind == ControlKind::Constant && !(constant_rate > 0.0))
    throw std::invalid_argument("constant control requires a positive rate");
}

VariabilityFactors variability_factors(double ca2, double cs2) {
  if (!(ca2 > 0.0) || !(cs2 > 0.0)) throw std::invalid_argument("SCVs must be positive");
  return {(ca2 + cs2) / 2.0, (ca2 + cs2) / (1.0 + cs2)};
}

double sr_discriminant(double lambda, const ControlSpec& spec) {
  const double sl = spec.target_s * lambda;
  const double b2 = spec.beta * spec.beta;
  return (sl + 1.0) * (sl + 1.0) * b2 + 4.0 * sl * b2 * (spec.v_fcfs() - 1.0);
}

double mu_sr(double lambda, const ControlSpec& spec) {
  const double s = spec.target_s;
  const double disc = std::max(0.0, sr_discriminant(lambda, spec));
  return ((s * lambda + 1.0) * spec.beta + std::sqrt(disc)) / (2.0 * s);
}

double mu_dm(double lambda, const ControlSpec& spec) {
  return spec.beta * (lambda + spec.v_ps() / spec.target_s);
}

double control_rate(double lambda, const ControlSpec& spec) {
  switch (spec.kind) {
    case ControlKind::SquareRoot: return mu_sr(lambda, spec);
    case ControlKind::DifferenceMatching: return mu_dm(lambda, spec);
    case ControlKind::Constant: return spec.constant_rate;
  }
  return spec.constant_rate;
}

namespace {

double checked_intensity(double mu, double lambda, const ControlSpec& spec) {
  const double rho = lambda * spec.beta / mu;
  if (!(rho < 1.0)) throw UnstableError("traffic intensity " + std::to_string(rho) + " >= 1");
  return rho;
}

}  // namespace

double predict_response_fcfs(double mu, double lambda, const ControlSpec& spec) {
  const double rho = checked_intensity(mu, lambda, spec);
  const double service = spec.beta / mu;
  return service + service * (rho / (1.0 - rho)) * spec.v_fcfs();
}

double predict_response_ps(double mu, double lambda, const ControlSpec& spec) {
  const double rho = checked_intensity(mu, lambda, spec);
  return (spec.beta / mu) * (1.0 / (1.0 - rho)) * spec.v_ps();
}

LightTrafficRates light_traffic_constants(const ControlSpec& spec) {
  return {spec.beta / spec.target_s, spec.beta * spec.v_ps() / spec.target_s};
}

RateFunction make_service_rate(const ControlSpec& spec, const RateFunction& arrival_rate) {
  spec.validate();
  if (spec.kind == ControlKind::Constant) return RateFunction::constant(spec.constant_rate);

  if (spec.kind == ControlKind::SquareRoot) {
    // The discriminant is quadratic in lambda; check both ends and the vertex.
    const double lo = arrival_rate.lower_bound();
    const double hi = arrival_rate.upper_bound();
    double worst = std::min(sr_discriminant(lo, spec), sr_discriminant(hi, spec));
    const double vertex = (1.0 - 2.0 * spec.v_fcfs()) / spec.target_s;
    if (vertex > lo && vertex < hi) worst = std::min(worst, sr_discriminant(vertex, spec));
    if (worst < 0.0)
      throw std::invalid_argument("square-root control has a negative discriminant on the arrival-rate range");
  }
  return RateFunction::controlled(spec, arrival_rate);
}

std::string format_significant(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, value);
  return buf;
}

}  // namespace tvps
