#include "har/config.hpp"

#include <fstream>

#include "har/errors.hpp"

namespace har {

using nlohmann::json;
using nlohmann::ordered_json;

SynthParams default_synth_params() {
  SynthParams p;
  // Intensity tiers are separated by peak magnitude; activities inside a tier
  // share amplitude and differ in their per-axis offsets (mean posture).
  p.activities = {
      {"sitting", {0.3, 0.0, 0.0}, 0.1, 0.25},
      {"standing", {-0.3, 0.0, 0.0}, 0.1, 0.25},
      {"walking_parking_lot", {1.0, 0.0, 0.0}, 0.5, 1.5},
      {"walking_treadmill", {-1.0, 0.0, 0.0}, 0.5, 1.8},
      {"running", {2.2, 0.0, 0.0}, 1.0, 2.2},
      {"exercising", {0.0, 2.2, 0.0}, 1.0, 1.7},
      {"jumping", {0.0, 0.0, 2.2}, 1.0, 2.6},
  };
  return p;
}

RunConfig default_run_config() {
  RunConfig cfg;
  cfg.cascade.labels = default_activity_labels();
  cfg.synth = default_synth_params();
  // theta equals the monolithic 25 Hz / L3 load for three channels
  cfg.budgets = BudgetSpec{750.0, 10.0, 10};
  return cfg;
}

void RunConfig::validate() const {
  cascade.validate();
  budgets.validate();
  if (!(window_s > 0.0)) throw ConfigError("window_s must be positive");
  if (epochs < 1) throw ConfigError("epochs must be at least 1");
  if (!(split.train_fraction > 0.0 && split.train_fraction <= 1.0))
    throw ConfigError("split.train_fraction must be in (0, 1]");
  const double rows = window_s * cascade.rates.high.hz();
  if (rows != static_cast<double>(static_cast<long long>(rows)))
    throw ConfigError("window_s times the high rate must be an integer number of samples");
}

namespace {

StageSpec parse_stage(const json& j, StageSpec fallback) {
  if (j.contains("rate")) fallback.tier = parse_rate_tier(j.at("rate").get<std::string>());
  if (j.contains("level")) fallback.level = parse_level(j.at("level").get<std::string>());
  return fallback;
}

ordered_json stage_json(const StageSpec& s) {
  return ordered_json{{"rate", to_string(s.tier)}, {"level", to_string(s.level)}};
}

}  // namespace

RunConfig run_config_from_json(const json& j) {
  RunConfig cfg = default_run_config();
  try {
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("window_s")) cfg.window_s = j.at("window_s").get<double>();
    if (j.contains("epochs")) cfg.epochs = j.at("epochs").get<std::size_t>();

    auto& cs = cfg.cascade;
    if (j.contains("rates")) {
      const auto& r = j.at("rates");
      cs.rates = RateSet{SamplingRate(r.value("low", cs.rates.low.hz())),
                         SamplingRate(r.value("medium", cs.rates.medium.hz())),
                         SamplingRate(r.value("high", cs.rates.high.hz()))};
    }
    if (j.contains("labels")) {
      cs.labels.clear();
      for (const auto& l : j.at("labels")) {
        cs.labels.push_back({l.at("id").get<int>(), l.at("name").get<std::string>(),
                             parse_intensity(l.at("intensity").get<std::string>())});
      }
    }
    if (j.contains("stages")) {
      const auto& s = j.at("stages");
      if (s.contains("gate_low")) cs.gate_low = parse_stage(s.at("gate_low"), cs.gate_low);
      if (s.contains("gate_medium")) cs.gate_medium = parse_stage(s.at("gate_medium"), cs.gate_medium);
      const char* leaf_keys[] = {"leaf_low", "leaf_medium", "leaf_high"};
      for (std::size_t i = 0; i < 3; ++i)
        if (s.contains(leaf_keys[i])) cs.leaves[i] = parse_stage(s.at(leaf_keys[i]), cs.leaves[i]);
    }
    if (j.contains("leaf_strategy")) {
      const auto s = j.at("leaf_strategy").get<std::string>();
      if (s == "one_vs_rest") cs.strategy = LeafStrategy::OneVsRest;
      else if (s == "pairwise") cs.strategy = LeafStrategy::Pairwise;
      else throw ConfigError("leaf_strategy must be one_vs_rest or pairwise, got '" + s + "'");
    }
    if (j.contains("pegasos")) {
      const auto& p = j.at("pegasos");
      cs.lambda = p.value("lambda", cs.lambda);
      cs.k = p.value("k", cs.k);
      cs.use_projection = p.value("projection", cs.use_projection);
      cs.bias = p.value("bias", cs.bias);
    }
    if (j.contains("dataset") && !j.at("dataset").is_null())
      cfg.dataset = j.at("dataset").get<std::string>();
    if (j.contains("synthetic")) {
      const auto& s = j.at("synthetic");
      auto& sp = cfg.synth;
      sp.channels = s.value("channels", sp.channels);
      sp.segments_per_activity = s.value("segments_per_activity", sp.segments_per_activity);
      sp.noise = s.value("noise", sp.noise);
      sp.require_separable = s.value("require_separable", sp.require_separable);
      if (s.contains("activities")) {
        sp.activities.clear();
        for (const auto& a : s.at("activities")) {
          sp.activities.push_back({a.at("name").get<std::string>(),
                                   a.at("offset").get<std::vector<double>>(),
                                   a.at("amplitude").get<double>(),
                                   a.at("frequency_hz").get<double>()});
        }
      }
    }
    if (j.contains("split")) {
      const auto& s = j.at("split");
      cfg.split.train_fraction = s.value("train_fraction", cfg.split.train_fraction);
      cfg.split.eval_on_train = s.value("eval_on_train", cfg.split.eval_on_train);
    }
    if (j.contains("budgets")) {
      const auto& b = j.at("budgets");
      cfg.budgets.theta = b.value("theta", cfg.budgets.theta);
      cfg.budgets.epsilon = b.value("epsilon", cfg.budgets.epsilon);
      cfg.budgets.k = b.value("k", cfg.budgets.k);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("cannot parse config file " + path.string() + ": " + e.what());
  }
  auto cfg = run_config_from_json(j);
  // dataset paths are relative to the config file
  if (cfg.dataset && cfg.dataset->is_relative()) cfg.dataset = path.parent_path() / *cfg.dataset;
  return cfg;
}

ordered_json to_json(const RunConfig& cfg) {
  const auto& cs = cfg.cascade;
  ordered_json labels = ordered_json::array();
  for (const auto& l : cs.labels)
    labels.push_back({{"id", l.id}, {"name", l.name}, {"intensity", to_string(l.intensity)}});

  ordered_json activities = ordered_json::array();
  for (const auto& a : cfg.synth.activities) {
    activities.push_back({{"name", a.name},
                          {"offset", a.offset},
                          {"amplitude", a.amplitude},
                          {"frequency_hz", a.frequency_hz}});
  }

  ordered_json j;
  j["seed"] = cfg.seed;
  j["window_s"] = cfg.window_s;
  j["epochs"] = cfg.epochs;
  j["rates"] = {{"low", cs.rates.low.hz()}, {"medium", cs.rates.medium.hz()}, {"high", cs.rates.high.hz()}};
  j["labels"] = labels;
  j["stages"] = {{"gate_low", stage_json(cs.gate_low)},
                 {"gate_medium", stage_json(cs.gate_medium)},
                 {"leaf_low", stage_json(cs.leaves[0])},
                 {"leaf_medium", stage_json(cs.leaves[1])},
                 {"leaf_high", stage_json(cs.leaves[2])}};
  j["leaf_strategy"] = cs.strategy == LeafStrategy::OneVsRest ? "one_vs_rest" : "pairwise";
  j["pegasos"] = {{"lambda", cs.lambda}, {"k", cs.k}, {"projection", cs.use_projection}, {"bias", cs.bias}};
  if (cfg.dataset) j["dataset"] = cfg.dataset->generic_string();
  else j["dataset"] = nullptr;
  j["synthetic"] = {{"channels", cfg.synth.channels},
                    {"segments_per_activity", cfg.synth.segments_per_activity},
                    {"noise", cfg.synth.noise},
                    {"require_separable", cfg.synth.require_separable},
                    {"activities", activities}};
  j["split"] = {{"train_fraction", cfg.split.train_fraction}, {"eval_on_train", cfg.split.eval_on_train}};
  j["budgets"] = {{"theta", cfg.budgets.theta}, {"epsilon", cfg.budgets.epsilon}, {"k", cfg.budgets.k}};
  return j;
}

}  // namespace har
