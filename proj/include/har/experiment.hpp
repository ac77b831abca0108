#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "har/cascade.hpp"
#include "har/config.hpp"
#include "har/costmodel.hpp"

namespace har {

struct NodeAccuracy {
  std::string id;
  std::size_t evaluated = 0;
  std::size_t correct = 0;
  double accuracy = 0.0;
};

struct EvalReport {
  std::vector<ActivityLabel> labels;  // sorted by id; confusion rows/cols follow this order
  std::size_t train_count = 0;
  std::size_t eval_count = 0;
  bool eval_on_train = false;
  std::size_t channels = 0;

  std::vector<std::vector<std::size_t>> confusion;  // [true][predicted]
  std::size_t correct = 0;
  double accuracy = 0.0;
  double routing_accuracy = 0.0;  // intensity tier chosen by the gates
  std::vector<NodeAccuracy> nodes;

  CostLedger ledger;              // accumulated by classify over the eval split
  IntensityMix true_mix{};        // seconds per true intensity in the eval split
  CostBreakdown formula_cost;     // cascade_cost on true_mix
  bool ledger_matches_formula = false;
  Savings savings;                // on true_mix
  BudgetReport budgets;
  std::size_t errors = 0;

  std::size_t window_capacity = 0;
  std::size_t max_window_len = 0;  // largest node window seen during training
};

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Stratified by label: each label's segments are shuffled and the first
/// floor(fraction * n) go to training. Throws ConfigError if any configured
/// label ends up with no training segment.
Split stratified_split(const std::vector<LabeledSegment>& stream, const CascadeSpec& spec,
                       double train_fraction, std::uint64_t seed);

/// Streams the training segments (shuffled per epoch) through train_segment.
/// Returns the largest node window observed.
std::size_t train_cascade(Cascade& cascade, const std::vector<LabeledSegment>& stream,
                          const std::vector<std::size_t>& order, std::size_t epochs,
                          std::uint64_t seed);

EvalReport evaluate(const Cascade& cascade, const std::vector<LabeledSegment>& stream,
                    const std::vector<std::size_t>& eval_idx, const BudgetSpec& budgets);

struct TrainEvalResult {
  EvalReport report;
  Cascade cascade;
};

TrainEvalResult train_eval(const RunConfig& cfg, const std::vector<LabeledSegment>& stream);
EvalReport run_train_eval(const RunConfig& cfg);

/// Seconds of data per intensity tier.
IntensityMix intensity_mix(const std::vector<LabeledSegment>& stream);

struct SavingsReport {
  IntensityMix mix{};
  std::size_t channels = 0;
  std::size_t segments = 0;
  Savings savings;
};

SavingsReport report_savings(const RunConfig& cfg);
SavingsReport savings_for(const CascadeSpec& spec, const IntensityMix& mix, std::size_t channels);

}  // namespace har
