#include "tvps/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace tvps {

const Snapshot& SimulationPath::snapshot_at(double epoch) const {
  const double tol = 1e-9 * std::max(1.0, std::abs(epoch));
  auto it = std::lower_bound(snapshots.begin(), snapshots.end(), epoch - tol,
                             [](const Snapshot& s, double t) { return s.epoch < t; });
  if (it == snapshots.end() || std::abs(it->epoch - epoch) > tol)
    throw std::out_of_range("no snapshot recorded at epoch " + std::to_string(epoch));
  return *it;
}

ProcessorSharingServer::ProcessorSharingServer(const CumulativeRate& mu, double start_time)
    : mu_(&mu), now_(start_time) {}

bool ProcessorSharingServer::later(const Entry& a, const Entry& b) {
  if (a.finish != b.finish) return a.finish > b.finish;
  return a.job > b.job;
}

void ProcessorSharingServer::advance(double t) {
  if (t <= now_) return;
  if (!heap_.empty()) attained_ += mu_->integrate(now_, t) / static_cast<double>(heap_.size());
  now_ = t;
}

void ProcessorSharingServer::admit(std::size_t job, double work) {
  if (!(work > 0.0)) throw std::invalid_argument("job work must be positive");
  heap_.push_back({attained_ + work, job});
  std::push_heap(heap_.begin(), heap_.end(), later);
}

double ProcessorSharingServer::next_departure_time() const {
  if (heap_.empty()) return std::numeric_limits<double>::infinity();
  const double remaining = std::max(0.0, heap_.front().finish - attained_);
  return mu_->inverse(static_cast<double>(heap_.size()) * remaining, now_);
}

std::vector<std::size_t> ProcessorSharingServer::depart(double t) {
  advance(t);
  std::vector<std::size_t> done;
  if (heap_.empty()) return done;
  // The departing job drains to exactly zero; absorb the inversion error.
  attained_ = std::max(attained_, heap_.front().finish);
  const double tol = kDrainTolerance * std::max(1.0, std::abs(attained_));
  while (!heap_.empty() && heap_.front().finish - attained_ <= tol) {
    done.push_back(heap_.front().job);
    std::pop_heap(heap_.begin(), heap_.end(), later);
    heap_.pop_back();
  }
  std::sort(done.begin(), done.end());
  if (heap_.empty()) attained_ = 0.0;
  return done;
}

std::vector<JobWork> ProcessorSharingServer::jobs() const {
  std::vector<JobWork> out;
  out.reserve(heap_.size());
  for (const Entry& e : heap_) out.push_back({e.job, std::max(0.0, e.finish - attained_)});
  std::sort(out.begin(), out.end(), [](const JobWork& a, const JobWork& b) { return a.job < b.job; });
  return out;
}

SimulationPath run(std::shared_ptr<const ArrivalStream> stream, const CumulativeRate& mu,
                   double horizon, std::span<const double> record_epochs) {
  if (!stream) throw std::invalid_argument("run requires an arrival stream");
  if (stream->sizes.size() != stream->times.size())
    throw std::invalid_argument("arrival stream has no job sizes attached");
  if (!std::is_sorted(record_epochs.begin(), record_epochs.end()))
    throw std::invalid_argument("record epochs must be sorted");
  if (!record_epochs.empty() && (record_epochs.front() < 0.0 || record_epochs.back() > horizon))
    throw std::invalid_argument("record epochs must lie in [0, horizon]");

  constexpr double kInf = std::numeric_limits<double>::infinity();
  const ArrivalStream& arrivals = *stream;
  const std::size_t n = arrivals.size();

  SimulationPath path;
  path.horizon = horizon;
  path.departures.assign(n, std::numeric_limits<double>::quiet_NaN());
  path.snapshots.reserve(record_epochs.size());
  path.events.reserve(2 * n);

  ProcessorSharingServer server(mu, 0.0);
  std::size_t next_arrival = 0;
  std::size_t next_epoch = 0;
  int q = 0;

  auto record = [&](double t, EventKind kind, std::size_t job) {
    path.events.push_back({t, kind, job});
    q += kind == EventKind::Arrival ? 1 : -1;
    path.step_times.push_back(t);
    path.step_values.push_back(q);
  };

  for (;;) {
    const double t_arr =
        next_arrival < n && arrivals.times[next_arrival] < horizon ? arrivals.times[next_arrival] : kInf;
    const double t_dep = server.next_departure_time();
    const double t_next = std::min(t_arr, t_dep);

    while (next_epoch < record_epochs.size() && record_epochs[next_epoch] < t_next) {
      const double epoch = record_epochs[next_epoch++];
      server.advance(epoch);
      path.snapshots.push_back({epoch, next_arrival, server.jobs()});
    }
    if (t_next > horizon) break;

    if (t_dep <= t_arr) {
      for (std::size_t job : server.depart(t_dep)) {
        path.departures[job] = t_dep;
        record(t_dep, EventKind::Departure, job);
      }
    } else {
      server.advance(t_arr);
      server.admit(next_arrival, arrivals.sizes[next_arrival]);
      record(t_arr, EventKind::Arrival, next_arrival);
      ++next_arrival;
    }
  }

  path.stream = std::move(stream);
  return path;
}

int queue_length_at(const SimulationPath& path, double t) {
  if (!(t >= 0.0) || t > path.horizon)
    throw std::out_of_range("queue_length_at: time outside [0, horizon]");
  auto it = std::upper_bound(path.step_times.begin(), path.step_times.end(), t);
  if (it == path.step_times.begin()) return 0;
  return path.step_values[static_cast<std::size_t>(it - path.step_times.begin()) - 1];
}

double time_average_queue(const SimulationPath& path, double t0, double t1) {
  if (!(t1 > t0) || t0 < 0.0 || t1 > path.horizon)
    throw std::out_of_range("time_average_queue: bad interval");
  double area = 0.0;
  double t = t0;
  int q = queue_length_at(path, t0);
  auto it = std::upper_bound(path.step_times.begin(), path.step_times.end(), t0);
  for (; it != path.step_times.end() && *it < t1; ++it) {
    area += q * (*it - t);
    t = *it;
    q = path.step_values[static_cast<std::size_t>(it - path.step_times.begin())];
  }
  area += q * (t1 - t);
  return area / (t1 - t0);
}

void write_path_csv(std::ostream& out, const SimulationPath& path) {
  out << "section,time,kind,job,remaining\n";
  char buf[128];
  for (const Event& e : path.events) {
    std::snprintf(buf, sizeof buf, "event,%.17g,%s,%zu,\n", e.time,
                  e.kind == EventKind::Arrival ? "arrival" : "departure", e.job);
    out << buf;
  }
  for (const Snapshot& s : path.snapshots) {
    for (const JobWork& w : s.jobs) {
      std::snprintf(buf, sizeof buf, "snapshot,%.17g,,%zu,%.17g\n", s.epoch, w.job, w.remaining);
      out << buf;
    }
  }
}

}  // namespace tvps
