#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "tvps/distributions.hpp"
#include "tvps/random.hpp"
#include "tvps/rates.hpp"

namespace tvps {

/// Arrival instants of one replication with the job sizes they bring.
struct ArrivalStream {
  std::vector<double> times;  // strictly increasing, all <= horizon
  std::vector<double> sizes;  // empty until attach_sizes(), then aligned with times
  double horizon = 0.0;

  std::size_t size() const { return times.size(); }
  /// Number of arrivals in (0, t].
  std::size_t count_until(double t) const;
};

/// How the first arrival is placed.
enum class FirstArrival {
  /// The equilibrium draw is a stationary-time-scale interval and is mapped
  /// through the inverse cumulative rate, consistent with A(t) = N(Lambda(t)).
  Inverted,
  /// The equilibrium draw is used as the first arrival time directly.
  Literal,
};

/// Nonstationary renewal arrivals by the inversion method. The renewal
/// process is normalized to unit mean, so E[A(t)] = Lambda(t) for any mean
/// of `base`. Generation stops at the first arrival beyond `horizon`, which is
/// dropped.
ArrivalStream generate(const DistributionSpec& base, const CumulativeRate& lambda, double horizon,
                       RandomStream& rng, FirstArrival first = FirstArrival::Inverted);

/// One independent job-size draw per arrival.
ArrivalStream attach_sizes(ArrivalStream stream, const DistributionSpec& jobsize, RandomStream& rng);

/// CSV with header "time,size"; values printed with round-trip precision.
void write_csv(std::ostream& out, const ArrivalStream& stream);
ArrivalStream read_csv(std::istream& in, double horizon);

}  // namespace tvps
