#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "tvps/random.hpp"

namespace tvps {

enum class Family { Exponential, Erlang, Lognormal };

std::string to_string(Family family);
/// Accepts "exponential"/"exp", "erlang"/"er", "lognormal"/"ln" (any case).
Family parse_family(std::string_view name);

namespace detail {
struct EquilibriumTable;
}

/// A base distribution parameterized by its mean and squared coefficient of
/// variation. Used for both interarrival (renewal) times and job sizes.
///
/// Construction validates the parameters; afterwards the object is immutable
/// and may be shared between threads.
class DistributionSpec {
 public:
  static DistributionSpec exponential(double mean);
  /// Requires 1/scv to be a positive integer, which becomes the shape.
  static DistributionSpec erlang(double mean, double scv);
  static DistributionSpec lognormal(double mean, double scv);
  static DistributionSpec make(Family family, double mean, double scv);

  Family family() const { return family_; }
  double mean() const { return mean_; }
  double scv() const { return scv_; }
  int erlang_shape() const { return shape_; }
  double log_mu() const { return log_mu_; }
  double log_sigma() const { return log_sigma_; }

  double cdf(double t) const;
  double survival(double t) const;
  double sample(RandomStream& rng) const;

  /// Stationary-excess (equilibrium) distribution
  /// F_e(t) = (1/mean) * integral_0^t (1 - F(s)) ds.
  double equilibrium_cdf(double t) const;
  double sample_equilibrium(RandomStream& rng) const;

  /// E[T^2] / (2 E[T]).
  double equilibrium_mean() const { return (scv_ + 1.0) * mean_ / 2.0; }

 private:
  DistributionSpec(Family family, double mean, double scv);

  Family family_;
  double mean_;
  double scv_;
  int shape_ = 1;
  double log_mu_ = 0.0;
  double log_sigma_ = 0.0;
  std::shared_ptr<const detail::EquilibriumTable> equilibrium_;
};

std::string describe(const DistributionSpec& spec);

}  // namespace tvps
