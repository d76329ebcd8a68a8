// tvps-sim: experiment runner for processor-sharing queues with time-varying
// arrival rates and service-rate controls.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

#include <CLI11.hpp>

#include "tvps/arrivals.hpp"
#include "tvps/config.hpp"
#include "tvps/controls.hpp"
#include "tvps/engine.hpp"
#include "tvps/harness.hpp"
#include "tvps/verify.hpp"

namespace {

struct Overrides {
  std::vector<double> gammas;
  std::vector<double> targets;
  std::vector<std::string> controls;
  std::vector<std::string> pairs;
  std::optional<double> horizon;
  std::optional<std::size_t> reps;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<unsigned> jobs;
  std::optional<double> constant_mu;
};

void add_override_options(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--gamma", o.gammas, "Arrival-rate frequency (repeatable; 0 = constant rate)");
  cmd->add_option("--target", o.targets, "Target response time s (repeatable)");
  cmd->add_option("--control", o.controls, "sr | dm | const (repeatable)");
  cmd->add_option("--pair", o.pairs, "Distribution pair such as ER/LN (repeatable)");
  cmd->add_option("--horizon", o.horizon, "Horizon for every selected gamma");
  cmd->add_option("--reps", o.reps, "Replications per cell");
  cmd->add_option("--seed", o.seed, "Master seed");
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_option("--jobs", o.jobs, "Worker threads (0 = all cores)");
  cmd->add_option("--mu", o.constant_mu, "Rate of the const control");
}

void apply(const Overrides& o, tvps::ExperimentConfig& c) {
  if (!o.gammas.empty()) c.gammas = o.gammas;
  if (!o.targets.empty()) c.targets = o.targets;
  if (!o.controls.empty()) {
    c.controls.clear();
    for (const auto& k : o.controls) c.controls.push_back(tvps::parse_control(k));
  }
  if (!o.pairs.empty()) {
    c.pairs.clear();
    for (const auto& p : o.pairs) c.pairs.push_back(tvps::standard_pair(p));
  }
  if (o.horizon)
    for (double g : c.gammas) c.horizons[g] = *o.horizon;
  if (o.reps) c.reps = *o.reps;
  if (o.seed) c.seed = *o.seed;
  if (o.out) c.out_dir = *o.out;
  if (o.jobs) c.jobs = *o.jobs;
  if (o.constant_mu) c.constant_mu = *o.constant_mu;
  c.validate();
}

tvps::ExperimentConfig build_config(const std::string& config_file, const Overrides& o) {
  tvps::ExperimentConfig c = config_file.empty() ? tvps::default_config() : tvps::load_config(config_file);
  apply(o, c);
  return c;
}

int cmd_run(const std::string& config_file, const Overrides& o) {
  const tvps::ExperimentConfig config = build_config(config_file, o);
  const auto cells = tvps::expand_cells(config);
  std::cerr << "running " << cells.size() << " cell(s), " << config.reps << " replications each -> "
            << config.out_dir.string() << "\n";
  const auto result = tvps::run_all(config, [](const tvps::CellResult& r) {
    std::cerr << "  " << tvps::report_row(r) << "\n";
  });
  std::cerr << "report: " << result.report_file.string() << "\n";
  return 0;
}

int cmd_verify(bool quick) {
  bool all = true;
  for (const auto& check : tvps::run_verification(quick)) {
    std::cout << (check.passed ? "PASS " : "FAIL ") << check.name << " -- " << check.detail << "\n";
    all = all && check.passed;
  }
  return all ? 0 : 1;
}

int cmd_trace(const std::string& config_file, const Overrides& o, std::size_t rep) {
  const tvps::ExperimentConfig config = build_config(config_file, o);
  const auto cells = tvps::expand_cells(config);
  if (cells.size() != 1) {
    std::cerr << "trace needs exactly one cell; narrow it with --pair/--gamma/--target/--control\n";
    return 2;
  }
  const tvps::CellSpec& cell = cells.front();
  const auto settings = tvps::settings_from(config);
  const auto lambda_rate = tvps::arrival_rate_for(cell, settings);
  const tvps::CumulativeRate lambda(lambda_rate);
  const tvps::CumulativeRate mu(tvps::make_service_rate(tvps::control_for(cell, settings), lambda_rate));
  const auto stream = tvps::replication_stream(cell, settings, lambda, mu, rep);
  const auto epochs = tvps::epoch_grid(tvps::cell_period(cell), settings.epochs_per_period, cell.horizon);
  const auto path = tvps::run(stream, mu, cell.horizon, epochs);

  std::filesystem::create_directories(config.out_dir);
  std::ofstream arrivals(config.out_dir / ("arrivals_" + cell.id() + ".csv"));
  tvps::write_csv(arrivals, *stream);
  std::ofstream events(config.out_dir / ("path_" + cell.id() + ".csv"));
  tvps::write_path_csv(events, path);
  std::cerr << "wrote " << stream->size() << " arrivals and " << path.events.size() << " events to "
            << config.out_dir.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulate GI_t/GI_t/1/PS queues under response-time stabilizing service-rate controls"};
  app.require_subcommand(1);

  std::string config_file;
  Overrides run_overrides;
  auto* run = app.add_subcommand("run", "Run the experiment grid and write CSV series and a report");
  run->add_option("--config", config_file, "JSON experiment config (defaults to the full grid)");
  add_override_options(run, run_overrides);

  bool quick = false;
  auto* verify = app.add_subcommand("verify", "Check the analytic properties and a stationary oracle");
  verify->add_flag("--quick", quick, "Shorter stationary simulation");

  std::string trace_config;
  Overrides trace_overrides;
  std::size_t trace_rep = 0;
  auto* trace = app.add_subcommand("trace", "Dump one replication's arrivals and event path as CSV");
  trace->add_option("--config", trace_config, "JSON experiment config");
  trace->add_option("--rep", trace_rep, "Replication index");
  add_override_options(trace, trace_overrides);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config_file, run_overrides);
    if (*verify) return cmd_verify(quick);
    if (*trace) return cmd_trace(trace_config, trace_overrides, trace_rep);
  } catch (const tvps::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
