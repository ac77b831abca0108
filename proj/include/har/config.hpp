#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "har/cascade_spec.hpp"
#include "har/costmodel.hpp"

namespace har {

/// Per-activity generative parameters: each channel is
/// offset[c] + amplitude * sin(2*pi*frequency_hz*t + phase_c) + U(-noise, noise),
/// with phase_c drawn uniformly per segment and channel.
struct SynthActivity {
  std::string name;
  std::vector<double> offset;  // one entry per channel
  double amplitude = 0.0;
  double frequency_hz = 0.0;
};

struct SynthParams {
  std::size_t channels = 3;
  std::size_t segments_per_activity = 100;
  double noise = 0.1;
  bool require_separable = true;
  std::vector<SynthActivity> activities;  // matched to labels by name
};

struct SplitSpec {
  double train_fraction = 0.8;
  bool eval_on_train = false;
};

struct RunConfig {
  CascadeSpec cascade;
  double window_s = 5.0;
  std::size_t epochs = 1;
  std::optional<std::filesystem::path> dataset;
  SynthParams synth;
  SplitSpec split;
  BudgetSpec budgets;
  std::uint64_t seed = 42;

  void validate() const;
};

/// 7 activities at 5/12/25 Hz, k=10, lambda=0.01, one epoch, synthetic data.
RunConfig default_run_config();
SynthParams default_synth_params();

/// Missing keys keep their defaults. Throws ConfigError on malformed input.
RunConfig run_config_from_json(const nlohmann::json& j);
RunConfig load_run_config(const std::filesystem::path& path);
nlohmann::ordered_json to_json(const RunConfig& cfg);

}  // namespace har
