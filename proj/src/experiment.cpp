#include "har/experiment.hpp"

#include <algorithm>
#include <map>
#include <random>

#include "har/dataset.hpp"
#include "har/errors.hpp"

namespace har {

namespace {

// Distinct streams for the split and the training order, both derived from the run seed.
std::mt19937_64 derived_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

}  // namespace

Split stratified_split(const std::vector<LabeledSegment>& stream, const CascadeSpec& spec,
                       double train_fraction, std::uint64_t seed) {
  std::map<int, std::vector<std::size_t>> by_label;
  for (const auto& l : spec.labels) by_label[l.id];
  for (std::size_t i = 0; i < stream.size(); ++i) {
    if (!by_label.contains(stream[i].label.id))
      throw ConfigError("segment label '" + stream[i].label.name + "' is not configured");
    by_label[stream[i].label.id].push_back(i);
  }

  auto rng = derived_rng(seed, 1);
  Split split;
  for (auto& [id, idx] : by_label) {
    std::shuffle(idx.begin(), idx.end(), rng);
    const auto n_train = static_cast<std::size_t>(train_fraction * static_cast<double>(idx.size()));
    if (n_train == 0) {
      throw ConfigError("split leaves label '" + spec.find_label(id)->name +
                        "' without training segments");
    }
    split.train.insert(split.train.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
    split.test.insert(split.test.end(), idx.begin() + static_cast<std::ptrdiff_t>(n_train), idx.end());
  }
  std::sort(split.test.begin(), split.test.end());
  return split;
}

std::size_t train_cascade(Cascade& cascade, const std::vector<LabeledSegment>& stream,
                          const std::vector<std::size_t>& order, std::size_t epochs,
                          std::uint64_t seed) {
  auto rng = derived_rng(seed, 2);
  std::vector<std::size_t> pass = order;
  std::size_t max_window = 0;
  for (std::size_t e = 0; e < epochs; ++e) {
    std::shuffle(pass.begin(), pass.end(), rng);
    for (std::size_t i : pass) {
      cascade.train_segment(stream[i]);
      max_window = std::max(max_window, cascade.max_window_len());
    }
  }
  return max_window;
}

IntensityMix intensity_mix(const std::vector<LabeledSegment>& stream) {
  IntensityMix mix{};
  for (const auto& ls : stream)
    mix[static_cast<std::size_t>(ls.label.intensity)] += ls.segment.duration_s();
  return mix;
}

EvalReport evaluate(const Cascade& cascade, const std::vector<LabeledSegment>& stream,
                    const std::vector<std::size_t>& eval_idx, const BudgetSpec& budgets) {
  const auto& spec = cascade.spec();
  EvalReport r;
  r.labels = spec.labels;
  std::sort(r.labels.begin(), r.labels.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  r.eval_count = eval_idx.size();
  r.channels = cascade.channels();
  r.window_capacity = spec.k;

  std::map<int, std::size_t> pos;
  for (std::size_t i = 0; i < r.labels.size(); ++i) pos[r.labels[i].id] = i;
  r.confusion.assign(r.labels.size(), std::vector<std::size_t>(r.labels.size(), 0));

  std::vector<Segment> segs;
  segs.reserve(eval_idx.size());
  for (std::size_t i : eval_idx) segs.push_back(stream[i].segment);
  const auto results = classify_batch(cascade, segs);

  std::size_t routed = 0;
  std::vector<LabeledSegment> eval_stream;
  for (std::size_t n = 0; n < eval_idx.size(); ++n) {
    const auto& truth = stream[eval_idx[n]].label;
    const auto& d = results[n].decision;
    ++r.confusion[pos.at(truth.id)][pos.at(d.label.id)];
    if (d.label.id == truth.id) ++r.correct;
    if (d.label.intensity == truth.intensity) ++routed;
    r.ledger += results[n].cost;
    eval_stream.push_back(stream[eval_idx[n]]);
  }
  r.errors = r.eval_count - r.correct;
  if (r.eval_count > 0) {
    r.accuracy = static_cast<double>(r.correct) / static_cast<double>(r.eval_count);
    r.routing_accuracy = static_cast<double>(routed) / static_cast<double>(r.eval_count);
  }

  for (const auto& node : cascade.nodes()) {
    NodeAccuracy na{node.id};
    for (std::size_t i : eval_idx) {
      const auto& ls = stream[i];
      if (!node.in_scope(ls.label.id)) continue;
      const auto p = node.model.predict(cascade.node_input(node, ls.segment));
      ++na.evaluated;
      if ((p.label == BinaryLabel::Positive) == node.is_positive(ls.label.id)) ++na.correct;
    }
    if (na.evaluated > 0)
      na.accuracy = static_cast<double>(na.correct) / static_cast<double>(na.evaluated);
    r.nodes.push_back(std::move(na));
  }

  r.true_mix = intensity_mix(eval_stream);
  r.formula_cost = cascade_cost(spec, r.true_mix, r.channels);
  r.ledger_matches_formula =
      static_cast<double>(r.ledger.sensed_samples()) == r.formula_cost.sensing &&
      static_cast<double>(r.ledger.feature_ops()) == r.formula_cost.compute;
  r.savings = compare_to_monolithic(spec, r.true_mix, r.channels);
  const double elapsed = r.ledger.duration_s();
  if (elapsed > 0.0)
    r.budgets = check_budgets(r.ledger, budgets, elapsed, r.errors, cascade.max_window_len());
  return r;
}

TrainEvalResult train_eval(const RunConfig& cfg, const std::vector<LabeledSegment>& stream) {
  cfg.validate();
  if (stream.empty()) throw ConfigError("dataset is empty");
  const auto split = stratified_split(stream, cfg.cascade, cfg.split.train_fraction, cfg.seed);
  const auto& eval_idx = cfg.split.eval_on_train ? split.train : split.test;
  if (eval_idx.empty()) throw ConfigError("evaluation split is empty");

  Cascade cascade(cfg.cascade, stream.front().segment.channels());
  const std::size_t max_window = train_cascade(cascade, stream, split.train, cfg.epochs, cfg.seed);

  auto report = evaluate(cascade, stream, eval_idx, cfg.budgets);
  report.train_count = split.train.size();
  report.eval_on_train = cfg.split.eval_on_train;
  report.max_window_len = max_window;
  return {std::move(report), std::move(cascade)};
}

EvalReport run_train_eval(const RunConfig& cfg) {
  return train_eval(cfg, load_stream(cfg)).report;
}

SavingsReport savings_for(const CascadeSpec& spec, const IntensityMix& mix, std::size_t channels) {
  return {mix, channels, 0, compare_to_monolithic(spec, mix, channels)};
}

SavingsReport report_savings(const RunConfig& cfg) {
  cfg.validate();
  const auto stream = load_stream(cfg);
  const std::size_t channels = stream.empty() ? 1 : stream.front().segment.channels();
  auto r = savings_for(cfg.cascade, intensity_mix(stream), channels);
  r.segments = stream.size();
  return r;
}

}  // namespace har
