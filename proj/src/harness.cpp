#include "tvps/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "tvps/arrivals.hpp"
#include "tvps/controls.hpp"
#include "tvps/engine.hpp"
#include "tvps/virtual_response.hpp"

#ifndef TVPS_VERSION
#define TVPS_VERSION "unknown"
#endif

namespace tvps {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

std::string CellSpec::id() const {
  std::string p = pair.name;
  for (char& c : p)
    if (c == '/') c = '-';
  return p + "_" + to_string(control) + "_g" + short_num(gamma) + "_s" + short_num(target);
}

std::vector<CellSpec> expand_cells(const ExperimentConfig& config) {
  std::vector<CellSpec> cells;
  for (const PairSpec& pair : config.pairs)
    for (double gamma : config.gammas)
      for (double target : config.targets)
        for (ControlKind control : config.controls)
          cells.push_back({pair, gamma, config.horizon_for(gamma), target, control});
  return cells;
}

RunSettings settings_from(const ExperimentConfig& c) {
  RunSettings s;
  s.reps = c.reps;
  s.seed = c.seed;
  s.epochs_per_period = c.epochs_per_period;
  s.jobs = c.jobs;
  s.rate_level = c.rate_level;
  s.rate_amplitude = c.rate_amplitude;
  s.constant_mu = c.constant_mu;
  s.first_arrival = c.first_arrival;
  s.size_policy = c.size_policy;
  return s;
}

double cell_period(const CellSpec& cell) {
  return cell.gamma > 0.0 ? 2.0 * std::numbers::pi / cell.gamma : cell.horizon / 10.0;
}

std::vector<double> epoch_grid(double period, int per_period, double horizon) {
  const double spacing = period / per_period;
  std::vector<double> epochs;
  for (std::size_t k = 0;; ++k) {
    const double t = static_cast<double>(k) * spacing;
    if (t > horizon) break;
    epochs.push_back(t);
  }
  return epochs;
}

void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(n, 1)));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < jobs; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
}

RateFunction arrival_rate_for(const CellSpec& cell, const RunSettings& settings) {
  return cell.gamma > 0.0 ? RateFunction::sinusoidal(settings.rate_level, settings.rate_amplitude, cell.gamma)
                          : RateFunction::constant(settings.rate_level);
}

ControlSpec control_for(const CellSpec& cell, const RunSettings& settings) {
  ControlSpec control;
  control.kind = cell.control;
  control.target_s = cell.target;
  control.beta = cell.pair.jobsize.mean();
  control.ca2 = cell.pair.arrival.scv();
  control.cs2 = cell.pair.jobsize.scv();
  control.constant_rate = settings.constant_mu;
  return control;
}

std::shared_ptr<const ArrivalStream> replication_stream(const CellSpec& cell, const RunSettings& settings,
                                                        const CumulativeRate& lambda, const CumulativeRate& mu,
                                                        std::size_t rep) {
  const RandomStream root(settings.seed, rep);
  RandomStream arrival_rng = root.split("arrivals");
  RandomStream size_rng = root.split("sizes");
  const double lookahead = replay_cap(cell.target, cell.pair.jobsize.mean(), mu);
  return std::make_shared<const ArrivalStream>(attach_sizes(
      generate(cell.pair.arrival, lambda, cell.horizon + lookahead, arrival_rng, settings.first_arrival),
      cell.pair.jobsize, size_rng));
}

CellResult run_cell(const CellSpec& cell, const RunSettings& settings) {
  if (settings.reps < 2) throw ConfigError("a cell needs at least two replications");
  const RateFunction lambda_rate = arrival_rate_for(cell, settings);
  RateFunction mu_rate = RateFunction::constant(1.0);
  try {
    mu_rate = make_service_rate(control_for(cell, settings), lambda_rate);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("cell " + cell.id() + ": " + e.what());
  }
  const CumulativeRate lambda(lambda_rate);
  const CumulativeRate mu(mu_rate);

  const double period = cell_period(cell);
  const std::vector<double> epochs = epoch_grid(period, settings.epochs_per_period, cell.horizon);
  const double window_start = epochs.back() - period;
  if (window_start < epochs.front() - 1e-9) throw ConfigError("cell " + cell.id() + ": horizon shorter than one period");

  std::vector<SampleSeries> queue(settings.reps);
  std::vector<SampleSeries> response(settings.reps);

  parallel_for(settings.reps, settings.jobs, [&](std::size_t rep) {
    RandomStream probe_rng = RandomStream(settings.seed, rep).split("probe");
    const SimulationPath path = run(replication_stream(cell, settings, lambda, mu, rep), mu, cell.horizon, epochs);

    SampleSeries& q = queue[rep];
    SampleSeries& r = response[rep];
    q.epochs = epochs;
    r.epochs = epochs;
    q.values.reserve(epochs.size());
    r.values.reserve(epochs.size());
    for (const Snapshot& snap : path.snapshots) {
      q.values.push_back(static_cast<double>(snap.jobs.size()));
      const double v = settings.size_policy == SizePolicy::RandomSize ? cell.pair.jobsize.sample(probe_rng)
                                                                     : cell.pair.jobsize.mean();
      r.values.push_back(probe(path, mu, snap.epoch, v, replay_cap(cell.target, v, mu)));
    }
  });

  std::vector<double> lambda_values;
  lambda_values.reserve(epochs.size());
  for (double t : epochs) lambda_values.push_back(lambda_rate(t));
  EnsembleSeries response_series = ensemble_mean(response);
  const StabilizationReport report = stabilization_report(response_series, cell.target, period, window_start);
  return CellResult{cell, ensemble_mean(queue), std::move(response_series), std::move(lambda_values), report};
}

void write_series_csv(std::ostream& out, const CellResult& r) {
  out << "t,EQ,Q_lo95,Q_hi95,ER,R_lo95,R_hi95,lambda\n";
  for (std::size_t i = 0; i < r.response.epochs.size(); ++i) {
    const double q = r.queue.mean[i];
    const double qh = r.queue.ci_half[i];
    const double m = r.response.mean[i];
    const double h = r.response.ci_half[i];
    out << num(r.response.epochs[i]) << ',' << num(q) << ',' << num(q - qh) << ',' << num(q + qh) << ','
        << num(m) << ',' << num(m - h) << ',' << num(m + h) << ',' << num(r.lambda[i]) << '\n';
  }
}

std::string report_header() { return "pair,control,gamma,s,amplitude,spatial_avg,RA%,RG%,good"; }

std::string report_row(const CellResult& r) {
  const StabilizationReport& rep = r.report;
  return r.cell.pair.name + "," + to_string(r.cell.control) + "," + short_num(r.cell.gamma) + "," +
         short_num(r.cell.target) + "," + num(rep.amplitude) + "," + num(rep.spatial_average) + "," +
         num(rep.ra_percent) + "," + num(rep.rg_percent) + "," + (is_good(rep) ? "yes" : "no");
}

RunAllResult run_all(const ExperimentConfig& config, const std::function<void(const CellResult&)>& progress) {
  config.validate();
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(config.out_dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + config.out_dir.string() + ": " + ec.message());

  RunAllResult all;
  all.report_file = config.out_dir / "report.csv";
  all.manifest_file = config.out_dir / "manifest.json";
  std::ofstream report(all.report_file);
  if (!report) throw ConfigError("cannot write " + all.report_file.string());
  report << report_header() << '\n';

  const RunSettings settings = settings_from(config);
  nlohmann::json cells = nlohmann::json::array();
  for (const CellSpec& cell : expand_cells(config)) {
    CellResult result = run_cell(cell, settings);
    const std::string series_name = "series_" + cell.id() + ".csv";
    std::ofstream series(config.out_dir / series_name);
    if (!series) throw ConfigError("cannot write " + (config.out_dir / series_name).string());
    write_series_csv(series, result);
    report << report_row(result) << '\n';
    cells.push_back({{"id", cell.id()},
                     {"series", series_name},
                     {"pair", cell.pair.name},
                     {"control", to_string(cell.control)},
                     {"gamma", cell.gamma},
                     {"target", cell.target},
                     {"horizon", cell.horizon},
                     {"window", {result.report.window_start, result.report.window_end}},
                     {"period", result.report.period_used},
                     {"ra_resolution_percent", result.report.ra_resolution_percent}});
    if (progress) progress(result);
    all.cells.push_back(std::move(result));
  }

  nlohmann::json manifest;
  manifest["version"] = TVPS_VERSION;
  manifest["seed"] = config.seed;
  manifest["config"] = nlohmann::json::parse(config_to_json(config));
  manifest["cells"] = cells;
  std::ofstream mf(all.manifest_file);
  if (!mf) throw ConfigError("cannot write " + all.manifest_file.string());
  mf << manifest.dump(2) << '\n';
  return all;
}

}  // namespace tvps
