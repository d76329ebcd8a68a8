#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "tvps/arrivals.hpp"
#include "tvps/config.hpp"
#include "tvps/control_spec.hpp"
#include "tvps/metrics.hpp"
#include "tvps/rates.hpp"

namespace tvps {

/// One point of the experiment grid.
struct CellSpec {
  PairSpec pair;
  double gamma = 0.0;
  double horizon = 0.0;
  double target = 1.0;
  ControlKind control = ControlKind::DifferenceMatching;

  /// File-name friendly identifier, e.g. "ER-LN_sr_g0.01_s0.1".
  std::string id() const;
};

/// Settings shared by every cell of a run.
struct RunSettings {
  std::size_t reps = 500;
  std::uint64_t seed = 20180713;
  int epochs_per_period = 100;
  unsigned jobs = 0;
  double rate_level = 1.0;
  double rate_amplitude = 0.2;
  double constant_mu = 0.0;
  FirstArrival first_arrival = FirstArrival::Inverted;
  SizePolicy size_policy = SizePolicy::RandomSize;
};

struct CellResult {
  CellSpec cell;
  EnsembleSeries queue;     // E[Q(t)] at the recording epochs
  EnsembleSeries response;  // E[R(t)] at the recording epochs
  std::vector<double> lambda;  // lambda(t) at the recording epochs
  StabilizationReport report;
};

std::vector<CellSpec> expand_cells(const ExperimentConfig& config);
RunSettings settings_from(const ExperimentConfig& config);

/// Period used for the epoch grid and the metric window: 2 pi / gamma, or
/// horizon / 10 for the constant arrival rate.
double cell_period(const CellSpec& cell);
/// k * period / per_period for every k with the epoch inside [0, horizon].
std::vector<double> epoch_grid(double period, int per_period, double horizon);

/// lambda(t) of a cell: sinusoidal for gamma > 0, constant otherwise.
RateFunction arrival_rate_for(const CellSpec& cell, const RunSettings& settings);
/// Control parameters of a cell; beta and the SCVs come from its pair.
ControlSpec control_for(const CellSpec& cell, const RunSettings& settings);

/// Arrivals and job sizes of replication `rep`. The stream runs past the
/// horizon by the replay cap so that probes near the horizon see the traffic
/// that follows them.
std::shared_ptr<const ArrivalStream> replication_stream(const CellSpec& cell, const RunSettings& settings,
                                                        const CumulativeRate& lambda, const CumulativeRate& mu,
                                                        std::size_t rep);

/// Runs every replication of one cell and aggregates. Replication r uses the
/// random streams derived from (seed, r) only, so cells that differ in the
/// control see identical arrivals and job sizes. Results do not depend on the
/// number of worker threads.
CellResult run_cell(const CellSpec& cell, const RunSettings& settings);

/// Header "t,EQ,Q_lo95,Q_hi95,ER,R_lo95,R_hi95,lambda".
void write_series_csv(std::ostream& out, const CellResult& result);
std::string report_header();
std::string report_row(const CellResult& result);

struct RunAllResult {
  std::vector<CellResult> cells;
  std::filesystem::path report_file;
  std::filesystem::path manifest_file;
};

/// Runs every cell and writes report.csv, one series_<id>.csv per cell and
/// manifest.json into config.out_dir. `progress` (may be empty) is called
/// after each cell.
RunAllResult run_all(const ExperimentConfig& config,
                     const std::function<void(const CellResult&)>& progress = {});

/// Runs fn(i) for i in [0, n) on `jobs` threads (0 = hardware concurrency).
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn);

}  // namespace tvps
