#include "har/report.hpp"

#include <cstdio>
#include <sstream>

#include "har/errors.hpp"

namespace har {

using nlohmann::json;
using nlohmann::ordered_json;

std::string format_pct(double pct) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", pct);
  return buf;
}

std::string to_structured(const ordered_json& j) { return j.dump(2) + "\n"; }

namespace {

ordered_json breakdown_json(const CostBreakdown& c) {
  return {{"sensing", c.sensing}, {"compute", c.compute}, {"total", c.total()}};
}

ordered_json savings_json(const Savings& s) {
  return {{"monolithic", breakdown_json(s.monolithic)},
          {"cascade", breakdown_json(s.cascade)},
          {"sensing_savings_pct", s.sensing_pct},
          {"compute_savings_pct", s.compute_pct},
          {"total_savings_pct", s.total_pct},
          {"sensing_savings", format_pct(s.sensing_pct)},
          {"compute_savings", format_pct(s.compute_pct)}};
}

ordered_json mix_json(const IntensityMix& m) {
  return {{"low", m[0]}, {"medium", m[1]}, {"high", m[2]}};
}

}  // namespace

ordered_json to_json(const EvalReport& r) {
  ordered_json labels = ordered_json::array();
  for (const auto& l : r.labels) labels.push_back(l.name);

  ordered_json nodes = ordered_json::array();
  for (const auto& n : r.nodes) {
    nodes.push_back(
        {{"id", n.id}, {"evaluated", n.evaluated}, {"correct", n.correct}, {"accuracy", n.accuracy}});
  }

  ordered_json branches;
  for (IntensityClass c : kIntensities) {
    const auto& b = r.ledger.branch(c);
    branches[std::string(to_string(c))] = {
        {"duration_s", b.duration_s}, {"sensed", b.sensed}, {"feature_ops", b.feature_ops}};
  }

  ordered_json j;
  j["train_segments"] = r.train_count;
  j["eval_segments"] = r.eval_count;
  j["eval_on_train"] = r.eval_on_train;
  j["channels"] = r.channels;
  j["accuracy"] = r.accuracy;
  j["correct"] = r.correct;
  j["routing_accuracy"] = r.routing_accuracy;
  j["nodes"] = nodes;
  j["labels"] = labels;
  j["confusion"] = r.confusion;
  j["ledger"] = {{"sensed_samples", r.ledger.sensed_samples()},
                 {"feature_ops", r.ledger.feature_ops()},
                 {"total", r.ledger.total()},
                 {"per_branch", branches}};
  j["true_mix_s"] = mix_json(r.true_mix);
  j["formula_cost"] = breakdown_json(r.formula_cost);
  j["ledger_matches_formula"] = r.ledger_matches_formula;
  j["savings"] = savings_json(r.savings);
  j["budgets"] = {{"units_per_second", r.budgets.units_per_second},
                  {"power_ok", r.budgets.power_ok},
                  {"error_ok", r.budgets.error_ok},
                  {"memory_ok", r.budgets.memory_ok},
                  {"errors", r.errors}};
  j["memory"] = {{"window_capacity", r.window_capacity}, {"max_window_len", r.max_window_len}};
  return j;
}

ordered_json to_json(const SavingsReport& r) {
  ordered_json j;
  j["segments"] = r.segments;
  j["channels"] = r.channels;
  j["mix_s"] = mix_json(r.mix);
  j["savings"] = savings_json(r.savings);
  j["reference"] = {{"sensing_savings_pct", kPublishedSensingSavingsPct},
                    {"compute_savings_pct", kPublishedComputeSavingsPct},
                    {"note", "published figures, shown for comparison only; not derived from this cost model"}};
  return j;
}

std::string confusion_csv(const EvalReport& r) {
  std::ostringstream out;
  out << "true\\predicted";
  for (const auto& l : r.labels) out << ',' << l.name;
  out << '\n';
  for (std::size_t i = 0; i < r.labels.size(); ++i) {
    out << r.labels[i].name;
    for (std::size_t v : r.confusion[i]) out << ',' << v;
    out << '\n';
  }
  return out.str();
}

std::string savings_csv(const SavingsReport& r) {
  const auto& s = r.savings;
  std::ostringstream out;
  char buf[64];
  auto row = [&](const char* name, double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << name << ',' << buf << '\n';
  };
  out << "metric,value\n";
  row("monolithic_sensing", s.monolithic.sensing);
  row("monolithic_compute", s.monolithic.compute);
  row("cascade_sensing", s.cascade.sensing);
  row("cascade_compute", s.cascade.compute);
  row("sensing_savings_pct", s.sensing_pct);
  row("compute_savings_pct", s.compute_pct);
  row("total_savings_pct", s.total_pct);
  row("reference_sensing_savings_pct", kPublishedSensingSavingsPct);
  row("reference_compute_savings_pct", kPublishedComputeSavingsPct);
  return out.str();
}

ordered_json model_to_json(const PegasosModel& m) {
  const auto& c = m.config();
  ordered_json window = ordered_json::array();
  for (const auto& p : m.window()) window.push_back({{"x", p.x}, {"y", static_cast<int>(p.y)}});
  return {{"lambda", c.lambda},
          {"k", c.k},
          {"use_projection", c.use_projection},
          {"dim", c.dim},
          {"t", m.iterations()},
          {"w", m.weights()},
          {"window", window}};
}

PegasosModel model_from_json(const json& j) {
  try {
    PegasosConfig c{j.at("lambda").get<double>(), j.at("k").get<std::size_t>(),
                    j.at("use_projection").get<bool>(), j.at("dim").get<std::size_t>()};
    std::deque<LabeledPoint> window;
    for (const auto& p : j.at("window"))
      window.push_back({p.at("x").get<std::vector<double>>(), binary_label_from_int(p.at("y").get<int>())});
    return PegasosModel(c, j.at("w").get<std::vector<double>>(), j.at("t").get<std::uint64_t>(),
                        std::move(window));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed model record: ") + e.what());
  }
}

ordered_json models_to_json(const Cascade& cascade) {
  ordered_json nodes = ordered_json::array();
  for (const auto& n : cascade.nodes()) {
    auto rec = model_to_json(n.model);
    rec["id"] = n.id;
    nodes.push_back(std::move(rec));
  }
  return {{"channels", cascade.channels()}, {"nodes", nodes}};
}

void load_models(Cascade& cascade, const json& j) {
  auto& nodes = cascade.mutable_nodes();
  const auto& recs = j.at("nodes");
  if (recs.size() != nodes.size()) throw ConfigError("model file has a different node count");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (recs[i].at("id").get<std::string>() != nodes[i].id)
      throw ConfigError("model file node '" + recs[i].at("id").get<std::string>() +
                        "' does not match '" + nodes[i].id + "'");
    auto m = model_from_json(recs[i]);
    if (m.config().dim != nodes[i].model.config().dim)
      throw ConfigError("model dimension mismatch for node '" + nodes[i].id + "'");
    nodes[i].model = std::move(m);
  }
}

}  // namespace har
