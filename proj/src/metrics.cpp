#include "tvps/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tvps {

EnsembleSeries ensemble_mean(std::span<const SampleSeries> replications) {
  if (replications.size() < 2)
    throw std::invalid_argument("a confidence interval needs at least two replications");
  const auto& grid = replications.front().epochs;
  for (const SampleSeries& r : replications) {
    if (r.epochs != grid || r.values.size() != grid.size())
      throw std::invalid_argument("replication series are not aligned on a common epoch grid");
  }

  const std::size_t m = grid.size();
  const double n = static_cast<double>(replications.size());
  EnsembleSeries out;
  out.epochs = grid;
  out.mean.assign(m, 0.0);
  out.ci_half.assign(m, 0.0);
  out.n_reps = replications.size();

  for (const SampleSeries& r : replications)
    for (std::size_t i = 0; i < m; ++i) out.mean[i] += r.values[i];
  for (double& v : out.mean) v /= n;

  std::vector<double> ss(m, 0.0);
  for (const SampleSeries& r : replications) {
    for (std::size_t i = 0; i < m; ++i) {
      const double d = r.values[i] - out.mean[i];
      ss[i] += d * d;
    }
  }
  for (std::size_t i = 0; i < m; ++i) out.ci_half[i] = 1.96 * std::sqrt(ss[i] / (n - 1.0) / n);
  return out;
}

namespace {

struct WindowSamples {
  std::vector<double> t;
  std::vector<double> v;
};

double interpolate(const EnsembleSeries& s, double t) {
  const auto& e = s.epochs;
  auto it = std::lower_bound(e.begin(), e.end(), t);
  if (it == e.end()) return s.mean.back();
  const std::size_t j = static_cast<std::size_t>(it - e.begin());
  if (*it == t || j == 0) return s.mean[j];
  const double w = (t - e[j - 1]) / (e[j] - e[j - 1]);
  return s.mean[j - 1] + w * (s.mean[j] - s.mean[j - 1]);
}

WindowSamples window_samples(const EnsembleSeries& s, double start, double end) {
  const auto& e = s.epochs;
  if (e.size() < 2 || e.size() != s.mean.size()) throw std::out_of_range("series grid too short");
  const double tol = 1e-9 * std::max(1.0, std::abs(end));
  if (start < e.front() - tol || end > e.back() + tol)
    throw std::out_of_range("metric window lies outside the epoch grid");
  start = std::max(start, e.front());
  end = std::min(end, e.back());

  WindowSamples w;
  w.t.push_back(start);
  w.v.push_back(interpolate(s, start));
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] > start + tol && e[i] < end - tol) {
      w.t.push_back(e[i]);
      w.v.push_back(s.mean[i]);
    }
  }
  w.t.push_back(end);
  w.v.push_back(interpolate(s, end));
  return w;
}

}  // namespace

StabilizationReport relative_amplitude(const EnsembleSeries& series, double period, double window_start) {
  if (!(period > 0.0)) throw std::invalid_argument("metric period must be positive");
  const double window_end = window_start + period;
  const WindowSamples w = window_samples(series, window_start, window_end);

  double area = 0.0;
  for (std::size_t i = 1; i < w.t.size(); ++i) area += 0.5 * (w.v[i] + w.v[i - 1]) * (w.t[i] - w.t[i - 1]);
  const auto [lo, hi] = std::minmax_element(w.v.begin(), w.v.end());

  StabilizationReport r;
  r.amplitude = *hi - *lo;
  r.spatial_average = area / (w.t.back() - w.t.front());
  r.ra_percent = r.amplitude / (2.0 * r.spatial_average) * 100.0;
  r.window_start = window_start;
  r.window_end = window_end;
  r.period_used = period;
  const double spacing = series.epochs[1] - series.epochs[0];
  r.ra_resolution_percent = r.ra_percent * (1.0 - std::cos(std::numbers::pi * std::min(1.0, spacing / period)));
  return r;
}

double relative_gap(const EnsembleSeries& series, double target_s, double period, double window_start) {
  if (!(target_s > 0.0)) throw std::invalid_argument("target response time must be positive");
  const double avg = relative_amplitude(series, period, window_start).spatial_average;
  return (target_s - avg) / target_s * 100.0;
}

StabilizationReport stabilization_report(const EnsembleSeries& series, double target_s, double period,
                                         double window_start) {
  if (!(target_s > 0.0)) throw std::invalid_argument("target response time must be positive");
  StabilizationReport r = relative_amplitude(series, period, window_start);
  r.rg_percent = (target_s - r.spatial_average) / target_s * 100.0;
  return r;
}

bool is_good(const StabilizationReport& report) {
  return report.ra_percent <= 10.0 && std::abs(report.rg_percent) <= 0.1;
}

}  // namespace tvps
