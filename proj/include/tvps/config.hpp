#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tvps/arrivals.hpp"
#include "tvps/control_spec.hpp"
#include "tvps/distributions.hpp"
#include "tvps/virtual_response.hpp"

namespace tvps {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Arrival-base / job-size distribution pair.
struct PairSpec {
  std::string name;
  DistributionSpec arrival;
  DistributionSpec jobsize;
};

/// The five mean-one pairs of the experiment grid: EXP/EXP, ER/ER, LN/LN,
/// ER/LN, LN/ER (ER has SCV 0.5, LN has SCV 2).
PairSpec standard_pair(std::string_view name);
std::vector<std::string> standard_pair_names();

struct ExperimentConfig {
  std::vector<PairSpec> pairs;
  /// Frequencies of lambda(t) = level + amplitude sin(gamma t); 0 selects the
  /// constant rate lambda = level.
  std::vector<double> gammas;
  std::map<double, double> horizons;  // per gamma; missing entries use default_horizon()
  double rate_level = 1.0;
  double rate_amplitude = 0.2;
  std::vector<double> targets;
  std::vector<ControlKind> controls;
  double constant_mu = 0.0;  // rate of the "const" control
  std::size_t reps = 500;
  std::uint64_t seed = 20180713;
  int epochs_per_period = 100;
  std::filesystem::path out_dir = "results";
  unsigned jobs = 0;  // worker threads; 0 = hardware concurrency
  FirstArrival first_arrival = FirstArrival::Inverted;
  SizePolicy size_policy = SizePolicy::RandomSize;

  double horizon_for(double gamma) const;
  /// Throws ConfigError.
  void validate() const;
};

/// 20000 for gamma = 0.001, 2000 for 0.01, 0.1 and the constant rate,
/// otherwise the smallest multiple of 1000 covering three periods.
double default_horizon(double gamma);

/// The full 5 x 3 x 2 x 2 grid at 500 replications.
ExperimentConfig default_config();

ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& file);
/// Canonical JSON rendering, used in the run manifest.
std::string config_to_json(const ExperimentConfig& config);

}  // namespace tvps
