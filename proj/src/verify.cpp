#include "tvps/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "tvps/arrivals.hpp"
#include "tvps/config.hpp"
#include "tvps/controls.hpp"
#include "tvps/engine.hpp"
#include "tvps/harness.hpp"
#include "tvps/virtual_response.hpp"

namespace tvps {

namespace {

std::string fmt(const char* pattern, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

ControlSpec pair_control(const PairSpec& pair, double s) {
  ControlSpec c;
  c.target_s = s;
  c.beta = pair.jobsize.mean();
  c.ca2 = pair.arrival.scv();
  c.cs2 = pair.jobsize.scv();
  return c;
}

// max_t |mu_sr - mu_dm| / mu_dm over one period of 1 + 0.2 sin(0.01 t).
double max_relative_gap(const ControlSpec& spec) {
  double worst = 0.0;
  constexpr int kPoints = 10000;
  for (int i = 0; i < kPoints; ++i) {
    const double t = 2.0 * std::numbers::pi / 0.01 * i / kPoints;
    const double lambda = 1.0 + 0.2 * std::sin(0.01 * t);
    const double dm = mu_dm(lambda, spec);
    worst = std::max(worst, std::abs(mu_sr(lambda, spec) - dm) / dm);
  }
  return worst;
}

CheckResult check_scv_one_coincidence() {
  const ControlSpec base = pair_control(standard_pair("EXP/EXP"), 1.0);
  double worst = 0.0;
  for (double s : {0.1, 1.0, 10.0}) {
    ControlSpec c = base;
    c.target_s = s;
    for (int i = 0; i < 10000; ++i) {
      const double lambda = 1.0 + 0.2 * std::sin(0.01 * i * 0.6283185307179586);
      worst = std::max(worst, std::abs(mu_sr(lambda, c) - mu_dm(lambda, c)));
    }
  }
  return {"controls coincide when both SCVs are 1", worst <= 1e-12, fmt("max |sr - dm| = %.3g", worst)};
}

CheckResult check_heavy_traffic_convergence() {
  bool ok = true;
  std::string detail;
  for (const auto& name : standard_pair_names()) {
    const PairSpec pair = standard_pair(name);
    std::array<double, 3> gaps{};
    const std::array<double, 3> targets{1e2, 1e3, 1e4};
    for (std::size_t k = 0; k < targets.size(); ++k) gaps[k] = max_relative_gap(pair_control(pair, targets[k]));
    const bool monotone = gaps[1] <= gaps[0] && gaps[2] <= gaps[1] &&
                          (gaps[0] < 1e-15 || (gaps[1] < gaps[0] && gaps[2] < gaps[1]));
    ok = ok && monotone && gaps[2] <= 1e-3;
    detail += name + fmt(" %.3g", gaps[0]) + fmt("/%.3g", gaps[1]) + fmt("/%.3g; ", gaps[2]);
  }
  return {"controls converge as s grows", ok, detail};
}

CheckResult check_variability_table() {
  struct Row {
    const char* pair;
    double fcfs;
    double ps;
  };
  const Row rows[] = {{"EXP/EXP", 1, 1},          {"ER/ER", 0.5, 0.6667}, {"LN/LN", 2, 1.3333},
                      {"ER/LN", 1.25, 0.8333},    {"LN/ER", 1.25, 1.6666}};
  bool ok = true;
  std::string detail;
  for (const Row& r : rows) {
    const PairSpec p = standard_pair(r.pair);
    const VariabilityFactors v = variability_factors(p.arrival.scv(), p.jobsize.scv());
    ok = ok && std::abs(v.fcfs - r.fcfs) < 1e-4 && std::abs(v.ps - r.ps) < 1e-4;
    detail += std::string(r.pair) + fmt(" (%.4f, ", v.fcfs) + fmt("%.4f); ", v.ps);
  }
  return {"variability factors per pair", ok, detail};
}

CheckResult check_light_traffic_table() {
  struct Row {
    const char* pair;
    double mu_dm;
    double mu_places;
    double response;
    double response_places;
  };
  const Row rows[] = {{"EXP/EXP", 10, 0, 0.1, 1},     {"ER/ER", 6.667, 3, 0.15, 2},
                      {"LN/LN", 13.333, 3, 0.07, 2},  {"ER/LN", 8.333, 3, 0.12, 2},
                      {"LN/ER", 16.666, 3, 0.06, 2}};
  bool ok = true;
  std::string detail;
  for (const Row& r : rows) {
    const LightTrafficRates lt = light_traffic_constants(pair_control(standard_pair(r.pair), 0.1));
    const double response = 1.0 / lt.dm;
    ok = ok && std::abs(lt.sr - 10.0) < 1e-12 && std::abs(lt.dm - r.mu_dm) < std::pow(10.0, -r.mu_places) &&
         std::abs(response - r.response) < std::pow(10.0, -r.response_places);
    detail += std::string(r.pair) + " mu_DM=" + format_significant(lt.dm, 5) + " R=" +
              format_significant(response, 3) + "; ";
  }
  return {"light-traffic rates at s = 0.1", ok, detail};
}

}  // namespace

std::vector<CheckResult> run_verification(bool quick) {
  std::vector<CheckResult> out;
  out.push_back(check_scv_one_coincidence());
  out.push_back(check_heavy_traffic_convergence());
  out.push_back(check_variability_table());
  out.push_back(check_light_traffic_table());

  // Stationary M/M/1/PS with lambda = 1, mu = 2: E[R] = 1, E[Q] = 1.
  const std::size_t reps = quick ? 40 : 200;
  const double horizon = quick ? 2000.0 : 5000.0;
  const double tolerance = quick ? 0.08 : 0.03;
  const double warmup = 100.0;
  const auto exp1 = DistributionSpec::exponential(1.0);
  const CumulativeRate lambda(RateFunction::constant(1.0));
  const CumulativeRate mu(RateFunction::constant(2.0));
  std::vector<double> epochs;
  for (double t = warmup; t <= horizon; t += 5.0) epochs.push_back(t);

  std::vector<double> rep_response(reps);
  std::vector<double> rep_queue(reps);
  parallel_for(reps, 0, [&](std::size_t r) {
    const RandomStream root(911, r);
    RandomStream a = root.split("arrivals");
    RandomStream z = root.split("sizes");
    RandomStream p = root.split("probe");
    auto stream = std::make_shared<const ArrivalStream>(
        attach_sizes(generate(exp1, lambda, horizon + 100.0, a), exp1, z));
    const SimulationPath path = run(stream, mu, horizon, epochs);
    double acc = 0.0;
    for (double e : epochs) {
      const double v = exp1.sample(p);
      acc += probe(path, mu, e, v, replay_cap(1.0, v, mu));
    }
    rep_response[r] = acc / static_cast<double>(epochs.size());
    rep_queue[r] = time_average_queue(path, warmup, horizon);
  });
  double mean_r = 0.0;
  double mean_q = 0.0;
  for (std::size_t r = 0; r < reps; ++r) {
    mean_r += rep_response[r] / static_cast<double>(reps);
    mean_q += rep_queue[r] / static_cast<double>(reps);
  }
  out.push_back({"stationary M/M/1/PS mean response = 1", std::abs(mean_r - 1.0) <= tolerance,
                 fmt("mean response %.4f (tolerance %.2f)", mean_r, tolerance)});
  out.push_back({"stationary M/M/1/PS mean queue length = 1", std::abs(mean_q - 1.0) <= tolerance,
                 fmt("time-average Q %.4f (tolerance %.2f)", mean_q, tolerance)});
  return out;
}

}  // namespace tvps
