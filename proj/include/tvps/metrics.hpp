#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tvps {

/// One replication's observations on an epoch grid.
struct SampleSeries {
  std::vector<double> epochs;
  std::vector<double> values;
};

/// Pointwise ensemble mean with normal-approximation 95% half-widths.
struct EnsembleSeries {
  std::vector<double> epochs;
  std::vector<double> mean;
  std::vector<double> ci_half;
  std::size_t n_reps = 0;
};

/// Requires at least two replications on identical grids
/// (std::invalid_argument otherwise). Sums run in replication order.
EnsembleSeries ensemble_mean(std::span<const SampleSeries> replications);

struct StabilizationReport {
  double amplitude = 0.0;        // max - min over the window
  double spatial_average = 0.0;  // time average over the window
  double ra_percent = 0.0;
  double rg_percent = 0.0;
  double window_start = 0.0;
  double window_end = 0.0;
  double period_used = 0.0;
  /// Bound on the RA error from sampling a sinusoid-like series on the grid.
  double ra_resolution_percent = 0.0;
};

/// Relative amplitude: (max - min) / (2 * spatial average) * 100 over
/// [window_start, window_start + period]. The window mean is a trapezoid on
/// the epoch grid, with linear interpolation at the window ends. Fills every
/// field except rg_percent. Throws std::out_of_range if the window is not
/// covered by the grid.
StabilizationReport relative_amplitude(const EnsembleSeries& series, double period, double window_start);

/// Relative gap (s - spatial average) / s * 100. May be negative.
double relative_gap(const EnsembleSeries& series, double target_s, double period, double window_start);

/// Both metrics over one window.
StabilizationReport stabilization_report(const EnsembleSeries& series, double target_s, double period,
                                         double window_start);

/// RA <= 10% and |RG| <= 0.1%.
bool is_good(const StabilizationReport& report);

}  // namespace tvps
