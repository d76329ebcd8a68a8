#include "tvps/distributions.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "quadrature.hpp"

namespace tvps {

namespace detail {

/// Cached F_e on a grid, used to invert the equilibrium cdf of families
/// without a convenient closed-form sampler.
struct EquilibriumTable {
  std::vector<double> nodes;
  std::vector<double> cumulative;
};

}  // namespace detail

namespace {

constexpr double kQuadTolerance = 1e-14;

double erlang_cdf(int stages, double stage_mean, double t) {
  if (t <= 0.0) return 0.0;
  const double x = t / stage_mean;
  double term = 1.0;
  double sum = 1.0;
  for (int n = 1; n < stages; ++n) {
    term *= x / n;
    sum += term;
  }
  return std::max(0.0, 1.0 - std::exp(-x) * sum);
}

double erlang_draw(int stages, double stage_mean, RandomStream& rng) {
  double acc = 0.0;
  for (int i = 0; i < stages; ++i) acc += std::log(rng.uniform());
  return -stage_mean * acc;
}

template <class F>
double quad(F f, double a, double b) {
  if (b <= a) return 0.0;
  return detail::integrate_adaptive(f, a, b, kQuadTolerance);
}

std::shared_ptr<const detail::EquilibriumTable> build_table(const DistributionSpec& spec) {
  auto table = std::make_shared<detail::EquilibriumTable>();
  auto surv = [&spec](double s) { return spec.survival(s); };

  double t_hi = spec.mean();
  while (spec.survival(t_hi) > 1e-17) t_hi *= 2.0;
  const double t_lo = spec.mean() * 1e-6;
  constexpr int kNodes = 2048;

  table->nodes.reserve(kNodes + 1);
  table->nodes.push_back(0.0);
  const double ratio = std::pow(t_hi / t_lo, 1.0 / (kNodes - 1));
  for (int i = 0; i < kNodes; ++i) table->nodes.push_back(t_lo * std::pow(ratio, i));
  table->nodes.back() = t_hi;

  table->cumulative.reserve(table->nodes.size());
  table->cumulative.push_back(0.0);
  for (std::size_t i = 1; i < table->nodes.size(); ++i) {
    const double piece = quad(surv, table->nodes[i - 1], table->nodes[i]) / spec.mean();
    table->cumulative.push_back(table->cumulative.back() + piece);
  }
  return table;
}

}  // namespace

std::string to_string(Family family) {
  switch (family) {
    case Family::Exponential: return "exponential";
    case Family::Erlang: return "erlang";
    case Family::Lognormal: return "lognormal";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "exponential" || lower == "exp") return Family::Exponential;
  if (lower == "erlang" || lower == "er") return Family::Erlang;
  if (lower == "lognormal" || lower == "ln") return Family::Lognormal;
  throw std::invalid_argument("unknown distribution family '" + std::string(name) + "'");
}

DistributionSpec::DistributionSpec(Family family, double mean, double scv)
    : family_(family), mean_(mean), scv_(scv) {
  if (!(mean > 0.0) || !std::isfinite(mean))
    throw std::invalid_argument("distribution mean must be positive and finite");
  if (!(scv > 0.0) || !std::isfinite(scv))
    throw std::invalid_argument("distribution scv must be positive and finite");

  switch (family) {
    case Family::Exponential:
      if (scv != 1.0) throw std::invalid_argument("exponential distribution requires scv = 1");
      break;
    case Family::Erlang: {
      const double k = 1.0 / scv;
      const double rounded = std::round(k);
      if (rounded < 1.0 || std::abs(k - rounded) > 1e-9 * k)
        throw std::invalid_argument("erlang distribution requires 1/scv to be a positive integer");
      shape_ = static_cast<int>(rounded);
      break;
    }
    case Family::Lognormal: {
      const double var = std::log1p(scv);
      log_sigma_ = std::sqrt(var);
      log_mu_ = std::log(mean) - var / 2.0;
      equilibrium_ = build_table(*this);
      break;
    }
  }
}

DistributionSpec DistributionSpec::exponential(double mean) {
  return DistributionSpec(Family::Exponential, mean, 1.0);
}

DistributionSpec DistributionSpec::erlang(double mean, double scv) {
  return DistributionSpec(Family::Erlang, mean, scv);
}

DistributionSpec DistributionSpec::lognormal(double mean, double scv) {
  return DistributionSpec(Family::Lognormal, mean, scv);
}

DistributionSpec DistributionSpec::make(Family family, double mean, double scv) {
  return DistributionSpec(family, mean, scv);
}

double DistributionSpec::cdf(double t) const {
  if (t <= 0.0) return 0.0;
  switch (family_) {
    case Family::Exponential: return -std::expm1(-t / mean_);
    case Family::Erlang: return erlang_cdf(shape_, mean_ / shape_, t);
    case Family::Lognormal:
      return 0.5 * std::erfc(-(std::log(t) - log_mu_) / (log_sigma_ * std::numbers::sqrt2));
  }
  return 0.0;
}

double DistributionSpec::survival(double t) const {
  if (t <= 0.0) return 1.0;
  switch (family_) {
    case Family::Exponential: return std::exp(-t / mean_);
    case Family::Erlang: return 1.0 - erlang_cdf(shape_, mean_ / shape_, t);
    case Family::Lognormal:
      return 0.5 * std::erfc((std::log(t) - log_mu_) / (log_sigma_ * std::numbers::sqrt2));
  }
  return 1.0;
}

double DistributionSpec::sample(RandomStream& rng) const {
  switch (family_) {
    case Family::Exponential: return -mean_ * std::log(rng.uniform());
    case Family::Erlang: return erlang_draw(shape_, mean_ / shape_, rng);
    case Family::Lognormal: return std::exp(log_mu_ + log_sigma_ * rng.standard_normal());
  }
  return mean_;
}

double DistributionSpec::equilibrium_cdf(double t) const {
  if (t <= 0.0) return 0.0;
  switch (family_) {
    case Family::Exponential: return cdf(t);
    case Family::Erlang: {
      // Equal-weight mixture of Erlang(1..k) with the same stage mean.
      double acc = 0.0;
      for (int j = 1; j <= shape_; ++j) acc += erlang_cdf(j, mean_ / shape_, t);
      return acc / shape_;
    }
    case Family::Lognormal: {
      const auto& nodes = equilibrium_->nodes;
      const auto& cum = equilibrium_->cumulative;
      auto surv = [this](double s) { return survival(s); };
      const auto it = std::upper_bound(nodes.begin(), nodes.end(), t);
      const std::size_t i = static_cast<std::size_t>(it - nodes.begin()) - 1;
      return std::min(1.0, cum[i] + quad(surv, nodes[i], t) / mean_);
    }
  }
  return 0.0;
}

double DistributionSpec::sample_equilibrium(RandomStream& rng) const {
  switch (family_) {
    case Family::Exponential: return sample(rng);
    case Family::Erlang: {
      const int stages =
          std::min(shape_, 1 + static_cast<int>(rng.uniform() * static_cast<double>(shape_)));
      return erlang_draw(stages, mean_ / shape_, rng);
    }
    case Family::Lognormal: break;
  }

  const auto& nodes = equilibrium_->nodes;
  const auto& cum = equilibrium_->cumulative;
  auto surv = [this](double s) { return survival(s); };
  const double u = rng.uniform();

  double lo;
  double hi;
  double f_lo;
  auto it = std::upper_bound(cum.begin(), cum.end(), u);
  if (it == cum.end()) {
    // Beyond the tabulated tail; extend the bracket outward.
    lo = nodes.back();
    f_lo = cum.back();
    hi = 2.0 * lo;
    while (f_lo + quad(surv, lo, hi) / mean_ < u && hi < 1e300) hi *= 2.0;
  } else {
    const std::size_t i = static_cast<std::size_t>(it - cum.begin());
    lo = nodes[i - 1];
    hi = nodes[i];
    f_lo = cum[i - 1];
  }

  // Safeguarded Newton on g(t) = F_e(t) - u, g'(t) = S(t) / mean.
  const double base = lo;
  const double base_f = f_lo;
  double a = lo;
  double b = hi;
  double t = a + (b - a) * 0.5;
  for (int iter = 0; iter < 100; ++iter) {
    const double g = base_f + quad(surv, base, t) / mean_ - u;
    if (g > 0.0) b = t; else a = t;
    const double slope = survival(t) / mean_;
    double next = slope > 0.0 ? t - g / slope : 0.5 * (a + b);
    if (!(next > a && next < b)) next = 0.5 * (a + b);
    const double step = std::abs(next - t);
    t = next;
    if (step <= 1e-14 * std::max(1.0, t) || (b - a) <= 1e-14 * std::max(1.0, t)) break;
  }
  return t;
}

std::string describe(const DistributionSpec& spec) {
  std::ostringstream out;
  out << to_string(spec.family()) << "(mean=" << spec.mean() << ", scv=" << spec.scv() << ")";
  return out.str();
}

}  // namespace tvps
