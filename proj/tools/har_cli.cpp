// Command-line harness: train-eval, savings, synth-gen, inspect-features.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "har/config.hpp"
#include "har/dataset.hpp"
#include "har/errors.hpp"
#include "har/experiment.hpp"
#include "har/features.hpp"
#include "har/report.hpp"

namespace {

struct CommonOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format = "structured";
};

void add_common(CLI::App* cmd, CommonOptions& o, bool with_format = true) {
  cmd->add_option("--config", o.config, "Run configuration (JSON)")->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "Seed for every random choice; overrides the config");
  cmd->add_option("--out", o.out, "Output path (stdout if omitted)");
  if (with_format)
    cmd->add_option("--format", o.format, "Report format")
        ->check(CLI::IsMember({"structured", "csv"}));
}

har::RunConfig resolve_config(const CommonOptions& o) {
  har::RunConfig cfg = o.config.empty() ? har::default_run_config() : har::load_run_config(o.config);
  if (o.seed) cfg.seed = *o.seed;
  return cfg;
}

void emit(const CommonOptions& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + o.out);
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cascaded online activity recognition"};
  app.require_subcommand(1);

  CommonOptions train_opts;
  bool eval_on_train = false;
  std::string save_models;
  auto* train = app.add_subcommand("train-eval", "Train the cascade and evaluate it");
  add_common(train, train_opts);
  train->add_flag("--eval-on-train", eval_on_train, "Evaluate on the training split");
  train->add_option("--save-models", save_models, "Write trained node models (JSON)");

  CommonOptions savings_opts;
  auto* savings = app.add_subcommand("savings", "Cascade vs monolithic sensing/compute cost");
  add_common(savings, savings_opts);

  CommonOptions synth_opts;
  auto* synth = app.add_subcommand("synth-gen", "Write a synthetic dataset directory");
  add_common(synth, synth_opts, false);
  synth->get_option("--out")->required()->description("Dataset root directory");

  CommonOptions inspect_opts;
  std::string input;
  auto* inspect = app.add_subcommand("inspect-features", "Print a segment's features per stage");
  add_common(inspect, inspect_opts);
  inspect->add_option("--input", input, "Segment file at the high rate (default: first synthetic segment)")
      ->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train) {
      auto cfg = resolve_config(train_opts);
      if (eval_on_train) cfg.split.eval_on_train = true;
      const auto stream = har::load_stream(cfg);
      const auto result = har::train_eval(cfg, stream);
      emit(train_opts, train_opts.format == "csv" ? har::confusion_csv(result.report)
                                                  : har::to_structured(har::to_json(result.report)));
      if (!save_models.empty()) {
        std::ofstream f(save_models, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + save_models);
        f << har::to_structured(har::models_to_json(result.cascade));
      }
    } else if (*savings) {
      const auto cfg = resolve_config(savings_opts);
      const auto r = har::report_savings(cfg);
      emit(savings_opts, savings_opts.format == "csv" ? har::savings_csv(r)
                                                      : har::to_structured(har::to_json(r)));
    } else if (*synth) {
      const auto cfg = resolve_config(synth_opts);
      const auto stream = har::synth(cfg.synth, cfg.cascade, cfg.window_s, cfg.seed);
      har::write_dataset(synth_opts.out, stream);
      std::cerr << "wrote " << stream.size() << " segments to " << synth_opts.out << "\n";
    } else if (*inspect) {
      const auto cfg = resolve_config(inspect_opts);
      const auto rows = static_cast<std::size_t>(cfg.window_s * cfg.cascade.rates.high.hz());
      const har::Segment seg =
          input.empty() ? har::load_stream(cfg).at(0).segment
                        : har::read_segment_file(input, cfg.cascade.rates.high, rows);

      nlohmann::ordered_json j = nlohmann::ordered_json::array();
      std::string csv = "rate_hz,level,channel,feature,value\n";
      for (auto tier : {har::RateTier::Low, har::RateTier::Medium, har::RateTier::High}) {
        const auto at_rate = har::decimate(seg, cfg.cascade.rates.at(tier));
        for (auto level : {har::FeatureLevel::L1, har::FeatureLevel::L2, har::FeatureLevel::L3}) {
          const auto fv = har::extract(at_rate, level);
          const auto ids = har::feature_set(level);
          nlohmann::ordered_json channels = nlohmann::ordered_json::array();
          for (std::size_t c = 0; c < fv.channel_count; ++c) {
            nlohmann::ordered_json feats;
            for (std::size_t f = 0; f < ids.size(); ++f) {
              const double v = fv.values[c * ids.size() + f];
              feats[std::string(har::to_string(ids[f]))] = v;
              char buf[64];
              std::snprintf(buf, sizeof buf, "%.17g", v);
              csv += std::to_string(at_rate.rate().hz()) + "," + std::string(har::to_string(level)) +
                     "," + std::to_string(c) + "," + std::string(har::to_string(ids[f])) + "," + buf + "\n";
            }
            channels.push_back(feats);
          }
          j.push_back({{"rate_hz", at_rate.rate().hz()},
                       {"rows", at_rate.rows()},
                       {"level", har::to_string(level)},
                       {"feature_ops", har::feature_op_count(level, at_rate)},
                       {"channels", channels}});
        }
      }
      emit(inspect_opts, inspect_opts.format == "csv" ? csv : har::to_structured(j));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
