#pragma once

#include <span>
#include <stdexcept>

#include "tvps/distributions.hpp"
#include "tvps/engine.hpp"
#include "tvps/metrics.hpp"
#include "tvps/random.hpp"
#include "tvps/rates.hpp"

namespace tvps {

/// Raised when a replay has not finished the virtual job within its cap.
class ReplayCapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SizePolicy {
  RandomSize,     // fresh job-size draw per probe
  FixedMeanSize,  // the mean job size
};

/// Virtual response time at `epoch`: the state recorded at the epoch gets an
/// extra job of `virtual_size`, the stored future arrivals of the path are
/// replayed, and the replay stops as soon as the virtual job finishes.
/// Throws std::out_of_range if the path has no snapshot at `epoch` and
/// ReplayCapError if the virtual job is still present after `cap` time units.
double probe(const SimulationPath& path, const CumulativeRate& mu, double epoch, double virtual_size,
             double cap);

/// Cap used by the experiment runner: 50 target response times plus 50 times
/// the service time of the virtual job alone at the slowest rate.
double replay_cap(double target_s, double virtual_size, const CumulativeRate& mu);

/// Probes every path at every epoch and averages across paths. Path i draws
/// its virtual sizes from rng.split(i), in epoch order.
EnsembleSeries mean_response_series(std::span<const SimulationPath> paths, const CumulativeRate& mu,
                                    std::span<const double> epochs, const DistributionSpec& jobsize,
                                    const RandomStream& rng, SizePolicy policy, double target_s);

}  // namespace tvps
