#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <memory>
#include <span>
#include <vector>

#include "tvps/arrivals.hpp"
#include "tvps/rates.hpp"

namespace tvps {

enum class EventKind { Arrival, Departure };

struct Event {
  double time;
  EventKind kind;
  std::size_t job;
};

struct JobWork {
  std::size_t job;
  double remaining;
};

/// System state at a recording epoch, after every event at or before it.
struct Snapshot {
  double epoch;
  std::size_t next_arrival;  // index into the stream of the first arrival after the epoch
  std::vector<JobWork> jobs;  // sorted by job id
};

struct SimulationPath {
  double horizon = 0.0;
  std::vector<Event> events;
  std::vector<double> step_times;  // Q(t) after each event, right-continuous
  std::vector<int> step_values;
  std::vector<Snapshot> snapshots;
  std::vector<double> departures;  // per arrival; NaN if still in system at the horizon
  std::shared_ptr<const ArrivalStream> stream;

  /// Throws std::out_of_range if no snapshot was recorded at `epoch`.
  const Snapshot& snapshot_at(double epoch) const;
};

/// Single-server processor-sharing station under a time-varying service rate.
///
/// Every job in service receives mu(t)/Q(t). The server tracks the attained
/// service per job since the last idle instant, so a job's remaining work is
/// (its finishing level - attained) and events cost O(log Q).
class ProcessorSharingServer {
 public:
  static constexpr double kDrainTolerance = 1e-12;
  static constexpr std::size_t kVirtualJob = std::numeric_limits<std::size_t>::max();

  ProcessorSharingServer(const CumulativeRate& mu, double start_time);

  double now() const { return now_; }
  std::size_t size() const { return heap_.size(); }
  bool empty() const { return heap_.empty(); }

  /// Moves the clock forward, draining work from every job in the system.
  void advance(double t);
  void admit(std::size_t job, double work);
  /// Time the job with the least remaining work finishes if nothing arrives;
  /// infinity when empty.
  double next_departure_time() const;
  /// Advances to `t` and removes the jobs drained to zero there, returned in
  /// ascending id order.
  std::vector<std::size_t> depart(double t);
  std::vector<JobWork> jobs() const;

 private:
  struct Entry {
    double finish;
    std::size_t job;
  };
  static bool later(const Entry& a, const Entry& b);

  const CumulativeRate* mu_;
  double now_;
  double attained_ = 0.0;
  std::vector<Entry> heap_;
};

/// Event-driven simulation up to `horizon`. Arrivals at or after the horizon
/// are not admitted; jobs in system at the horizon stay incomplete.
/// Departures precede arrivals at equal times. `record_epochs` must be sorted
/// and lie in [0, horizon].
SimulationPath run(std::shared_ptr<const ArrivalStream> stream, const CumulativeRate& mu,
                   double horizon, std::span<const double> record_epochs);

/// Q(t), right-continuous. Throws std::out_of_range outside [0, horizon].
int queue_length_at(const SimulationPath& path, double t);

/// (1 / (t1 - t0)) * integral of Q over [t0, t1].
double time_average_queue(const SimulationPath& path, double t0, double t1);

/// Events and snapshots as CSV (section,time,kind,job,remaining).
void write_path_csv(std::ostream& out, const SimulationPath& path);

}  // namespace tvps
