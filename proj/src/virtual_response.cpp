#include "tvps/virtual_response.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace tvps {

double probe(const SimulationPath& path, const CumulativeRate& mu, double epoch, double virtual_size,
             double cap) {
  if (!(virtual_size > 0.0)) throw std::invalid_argument("virtual job size must be positive");
  const Snapshot& snap = path.snapshot_at(epoch);
  const ArrivalStream& arrivals = *path.stream;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  constexpr std::size_t kVirtual = ProcessorSharingServer::kVirtualJob;

  ProcessorSharingServer server(mu, snap.epoch);
  for (const JobWork& w : snap.jobs) {
    if (w.remaining > 0.0) server.admit(w.job, w.remaining);
  }
  server.admit(kVirtual, virtual_size);

  const double limit = snap.epoch + cap;
  std::size_t next = snap.next_arrival;
  for (;;) {
    const double t_arr = next < arrivals.size() ? arrivals.times[next] : kInf;
    const double t_dep = server.next_departure_time();
    if (std::min(t_arr, t_dep) > limit)
      throw ReplayCapError("virtual job unfinished " + std::to_string(cap) + " time units after epoch " +
                           std::to_string(snap.epoch));
    if (t_dep <= t_arr) {
      const auto done = server.depart(t_dep);
      if (!done.empty() && done.back() == kVirtual) return t_dep - snap.epoch;
    } else {
      server.advance(t_arr);
      server.admit(next, arrivals.sizes[next]);
      ++next;
    }
  }
}

double replay_cap(double target_s, double virtual_size, const CumulativeRate& mu) {
  return 50.0 * target_s + 50.0 * virtual_size / mu.rate().lower_bound();
}

EnsembleSeries mean_response_series(std::span<const SimulationPath> paths, const CumulativeRate& mu,
                                    std::span<const double> epochs, const DistributionSpec& jobsize,
                                    const RandomStream& rng, SizePolicy policy, double target_s) {
  std::vector<SampleSeries> per_path;
  per_path.reserve(paths.size());
  for (std::size_t i = 0; i < paths.size(); ++i) {
    RandomStream sizes = rng.split(static_cast<std::uint64_t>(i));
    SampleSeries s;
    s.epochs.assign(epochs.begin(), epochs.end());
    s.values.reserve(epochs.size());
    for (double e : epochs) {
      const double v = policy == SizePolicy::RandomSize ? jobsize.sample(sizes) : jobsize.mean();
      s.values.push_back(probe(paths[i], mu, e, v, replay_cap(target_s, v, mu)));
    }
    per_path.push_back(std::move(s));
  }
  return ensemble_mean(per_path);
}

}  // namespace tvps
