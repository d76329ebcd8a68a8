#include "tvps/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

namespace tvps {

using nlohmann::json;

namespace {

DistributionSpec standard_distribution(std::string_view code) {
  const Family f = parse_family(code);
  switch (f) {
    case Family::Exponential: return DistributionSpec::exponential(1.0);
    case Family::Erlang: return DistributionSpec::erlang(1.0, 0.5);
    case Family::Lognormal: return DistributionSpec::lognormal(1.0, 2.0);
  }
  throw ConfigError("unreachable");
}

DistributionSpec distribution_from_json(const json& j) {
  try {
    return DistributionSpec::make(parse_family(j.at("family").get<std::string>()),
                                  j.value("mean", 1.0), j.value("scv", 1.0));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("bad distribution: ") + e.what());
  }
}

json distribution_to_json(const DistributionSpec& d) {
  return {{"family", to_string(d.family())}, {"mean", d.mean()}, {"scv", d.scv()}};
}

}  // namespace

PairSpec standard_pair(std::string_view name) {
  const auto slash = name.find('/');
  if (slash == std::string_view::npos) throw ConfigError("pair '" + std::string(name) + "' must look like ER/LN");
  try {
    return {std::string(name), standard_distribution(name.substr(0, slash)),
            standard_distribution(name.substr(slash + 1))};
  } catch (const std::invalid_argument& e) {
    throw ConfigError("pair '" + std::string(name) + "': " + e.what());
  }
}

std::vector<std::string> standard_pair_names() {
  return {"EXP/EXP", "ER/ER", "LN/LN", "ER/LN", "LN/ER"};
}

double default_horizon(double gamma) {
  if (gamma == 0.001) return 20000.0;
  if (gamma == 0.01 || gamma == 0.1 || gamma == 0.0) return 2000.0;
  const double three_periods = 3.0 * 2.0 * std::numbers::pi / gamma;
  return std::max(2000.0, std::ceil(three_periods / 1000.0) * 1000.0);
}

double ExperimentConfig::horizon_for(double gamma) const {
  if (auto it = horizons.find(gamma); it != horizons.end()) return it->second;
  return default_horizon(gamma);
}

void ExperimentConfig::validate() const {
  if (reps < 2) throw ConfigError("reps must be at least 2");
  if (epochs_per_period < 2) throw ConfigError("epochs_per_period must be at least 2");
  if (!(rate_level > std::abs(rate_amplitude))) throw ConfigError("arrival rate needs level > |amplitude|");
  for (double g : gammas) {
    if (g < 0.0) throw ConfigError("gamma must be nonnegative");
    const double h = horizon_for(g);
    if (!(h > 0.0)) throw ConfigError("horizon must be positive");
    if (g > 0.0 && h < 3.0 * 2.0 * std::numbers::pi / g - 1e-9)
      throw ConfigError("horizon " + std::to_string(h) + " covers fewer than three periods of gamma " +
                        std::to_string(g));
  }
  for (double s : targets)
    if (!(s > 0.0)) throw ConfigError("targets must be positive");
  for (ControlKind c : controls)
    if (c == ControlKind::Constant && !(constant_mu > 0.0))
      throw ConfigError("control 'const' needs a positive constant_mu");
}

ExperimentConfig default_config() {
  ExperimentConfig c;
  for (const auto& name : standard_pair_names()) c.pairs.push_back(standard_pair(name));
  c.gammas = {0.001, 0.01, 0.1};
  c.targets = {0.1, 10.0};
  c.controls = {ControlKind::SquareRoot, ControlKind::DifferenceMatching};
  return c;
}

ExperimentConfig parse_config(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");

  ExperimentConfig c = default_config();
  try {
    if (j.contains("pairs")) {
      c.pairs.clear();
      for (const json& p : j.at("pairs")) {
        if (p.is_string()) {
          c.pairs.push_back(standard_pair(p.get<std::string>()));
        } else {
          c.pairs.push_back({p.at("name").get<std::string>(), distribution_from_json(p.at("arrival")),
                             distribution_from_json(p.at("jobsize"))});
        }
      }
    }
    if (j.contains("arrival_rate")) {
      const json& r = j.at("arrival_rate");
      c.rate_level = r.value("level", c.rate_level);
      c.rate_amplitude = r.value("amplitude", c.rate_amplitude);
    }
    if (j.contains("gammas")) c.gammas = j.at("gammas").get<std::vector<double>>();
    if (j.contains("horizons")) {
      const json& h = j.at("horizons");
      if (h.is_array()) {
        const auto values = h.get<std::vector<double>>();
        if (values.size() != c.gammas.size()) throw ConfigError("horizons list must align with gammas");
        for (std::size_t i = 0; i < values.size(); ++i) c.horizons[c.gammas[i]] = values[i];
      } else {
        for (const auto& [k, v] : h.items()) c.horizons[std::stod(k)] = v.get<double>();
      }
    }
    if (j.contains("targets")) c.targets = j.at("targets").get<std::vector<double>>();
    if (j.contains("controls")) {
      c.controls.clear();
      for (const json& k : j.at("controls")) c.controls.push_back(parse_control(k.get<std::string>()));
    }
    c.constant_mu = j.value("constant_mu", c.constant_mu);
    c.reps = j.value("reps", c.reps);
    c.seed = j.value("seed", c.seed);
    c.epochs_per_period = j.value("epochs_per_period", c.epochs_per_period);
    if (j.contains("out")) c.out_dir = j.at("out").get<std::string>();
    c.jobs = j.value("jobs", c.jobs);
    if (j.contains("first_arrival")) {
      const auto v = j.at("first_arrival").get<std::string>();
      if (v == "inverted") c.first_arrival = FirstArrival::Inverted;
      else if (v == "literal") c.first_arrival = FirstArrival::Literal;
      else throw ConfigError("first_arrival must be 'inverted' or 'literal'");
    }
    if (j.contains("virtual_size")) {
      const auto v = j.at("virtual_size").get<std::string>();
      if (v == "random") c.size_policy = SizePolicy::RandomSize;
      else if (v == "mean") c.size_policy = SizePolicy::FixedMeanSize;
      else throw ConfigError("virtual_size must be 'random' or 'mean'");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config field: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot read config file " + file.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string config_to_json(const ExperimentConfig& c) {
  json j;
  j["pairs"] = json::array();
  for (const PairSpec& p : c.pairs)
    j["pairs"].push_back({{"name", p.name},
                          {"arrival", distribution_to_json(p.arrival)},
                          {"jobsize", distribution_to_json(p.jobsize)}});
  j["arrival_rate"] = {{"level", c.rate_level}, {"amplitude", c.rate_amplitude}};
  j["gammas"] = c.gammas;
  json horizons = json::array();
  for (double g : c.gammas) horizons.push_back(c.horizon_for(g));
  j["horizons"] = horizons;
  j["targets"] = c.targets;
  j["controls"] = json::array();
  for (ControlKind k : c.controls) j["controls"].push_back(to_string(k));
  j["constant_mu"] = c.constant_mu;
  j["reps"] = c.reps;
  j["seed"] = c.seed;
  j["epochs_per_period"] = c.epochs_per_period;
  j["out"] = c.out_dir.string();
  j["first_arrival"] = c.first_arrival == FirstArrival::Inverted ? "inverted" : "literal";
  j["virtual_size"] = c.size_policy == SizePolicy::RandomSize ? "random" : "mean";
  return j.dump(2);
}

}  // namespace tvps
