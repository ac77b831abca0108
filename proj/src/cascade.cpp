#include "har/cascade.hpp"

#include <algorithm>
#include <array>
#include <exception>
#include <optional>
#include <set>
#include <string>

#include "har/errors.hpp"
#include "har/features.hpp"

namespace har {

// ---------------------------------------------------------------- spec

std::string_view to_string(RateTier t) {
  switch (t) {
    case RateTier::Low: return "low";
    case RateTier::Medium: return "medium";
    case RateTier::High: return "high";
  }
  return "?";
}

RateTier parse_rate_tier(std::string_view s) {
  if (s == "low") return RateTier::Low;
  if (s == "medium") return RateTier::Medium;
  if (s == "high") return RateTier::High;
  throw SpecError("unknown rate tier '" + std::string(s) + "'");
}

SamplingRate RateSet::at(RateTier t) const {
  switch (t) {
    case RateTier::Low: return low;
    case RateTier::Medium: return medium;
    case RateTier::High: return high;
  }
  throw SpecError("unknown rate tier");
}

std::vector<ActivityLabel> CascadeSpec::labels_in(IntensityClass c) const {
  std::vector<ActivityLabel> out;
  for (const auto& l : labels)
    if (l.intensity == c) out.push_back(l);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  return out;
}

std::optional<ActivityLabel> CascadeSpec::find_label(int id) const {
  for (const auto& l : labels)
    if (l.id == id) return l;
  return std::nullopt;
}

const ActivityLabel* CascadeSpec::find_label(std::string_view name) const {
  for (const auto& l : labels)
    if (l.name == name) return &l;
  return nullptr;
}

void CascadeSpec::validate() const {
  if (!(rates.low < rates.medium && rates.medium < rates.high))
    throw SpecError("rates must be strictly increasing low < medium < high");

  std::set<int> ids;
  std::set<std::string> names;
  for (const auto& l : labels) {
    if (!ids.insert(l.id).second) throw SpecError("duplicate label id " + std::to_string(l.id));
    if (!names.insert(l.name).second) throw SpecError("duplicate label name '" + l.name + "'");
  }
  for (IntensityClass c : kIntensities) {
    if (labels_in(c).empty())
      throw SpecError("no activity labels for intensity '" + std::string(to_string(c)) + "'");
  }

  // Paths are gate_low -> leaf_low, gate_low -> gate_medium -> leaf_{medium,high}.
  // Rates and feature levels may not decrease along a path.
  auto le = [](const StageSpec& a, const StageSpec& b) {
    return a.tier <= b.tier && a.level <= b.level;
  };
  if (!le(gate_low, leaf(IntensityClass::Low)) || !le(gate_low, gate_medium) ||
      !le(gate_medium, leaf(IntensityClass::Medium)) || !le(gate_medium, leaf(IntensityClass::High)))
    throw SpecError("stage rates and feature levels must not decrease along a cascade path");

  PegasosConfig{lambda, k, use_projection, 1}.validate();
}

std::vector<ActivityLabel> default_activity_labels() {
  return {
      {0, "sitting", IntensityClass::Low},
      {1, "standing", IntensityClass::Low},
      {2, "walking_parking_lot", IntensityClass::Medium},
      {3, "walking_treadmill", IntensityClass::Medium},
      {4, "running", IntensityClass::High},
      {5, "exercising", IntensityClass::High},
      {6, "jumping", IntensityClass::High},
  };
}

// ---------------------------------------------------------------- nodes

bool CascadeNode::in_scope(int label_id) const {
  return std::find(scope.begin(), scope.end(), label_id) != scope.end();
}

bool CascadeNode::is_positive(int label_id) const {
  return std::find(positives.begin(), positives.end(), label_id) != positives.end();
}

namespace {

std::vector<int> ids_of(const std::vector<ActivityLabel>& labels) {
  std::vector<int> out;
  for (const auto& l : labels) out.push_back(l.id);
  return out;
}

std::string leaf_prefix(IntensityClass c) { return std::string(to_string(c)) + ":"; }

}  // namespace

struct Cascade::StageInputs {
  const Segment& full;
  const Cascade& cascade;
  std::array<std::optional<Segment>, 3> decimated{};
  std::array<std::array<std::optional<std::vector<double>>, 3>, 3> features{};

  const Segment& at(RateTier t) {
    auto& slot = decimated[static_cast<std::size_t>(t)];
    if (!slot) slot = decimate(full, cascade.spec_.rates.at(t));
    return *slot;
  }

  const std::vector<double>& input(const StageSpec& stage) {
    auto& slot = features[static_cast<std::size_t>(stage.tier)]
                         [static_cast<std::size_t>(stage.level) - 1];
    if (!slot) {
      slot = extract(at(stage.tier), stage.level).values;
      if (cascade.spec_.bias) slot->push_back(1.0);
    }
    return *slot;
  }
};

Cascade::Cascade(CascadeSpec spec, std::size_t channels)
    : spec_(std::move(spec)), channels_(channels), current_rate_(spec_.rates.low) {
  spec_.validate();
  if (channels_ == 0) throw DomainError("cascade needs at least one channel");

  auto make_node = [&](std::string id, NodeRole role, IntensityClass c, StageSpec stage,
                       std::vector<int> scope, std::vector<int> positives) {
    const std::size_t dim =
        channels_ * feature_set(stage.level).size() + (spec_.bias ? 1u : 0u);
    PegasosConfig cfg{spec_.lambda, spec_.k, spec_.use_projection, dim};
    nodes_.push_back(CascadeNode{std::move(id), role, c, stage, std::move(scope),
                                 std::move(positives), PegasosModel(cfg)});
  };

  const auto low = spec_.labels_in(IntensityClass::Low);
  const auto med = spec_.labels_in(IntensityClass::Medium);
  const auto high = spec_.labels_in(IntensityClass::High);

  std::vector<int> all;
  for (const auto* group : {&low, &med, &high})
    for (const auto& l : *group) all.push_back(l.id);
  std::vector<int> non_low = ids_of(med);
  for (const auto& l : high) non_low.push_back(l.id);

  make_node("gate_low", NodeRole::GateLow, IntensityClass::Low, spec_.gate_low, all, ids_of(low));
  make_node("gate_medium", NodeRole::GateMedium, IntensityClass::Medium, spec_.gate_medium,
            non_low, ids_of(med));

  for (IntensityClass c : kIntensities) {
    const auto labels = spec_.labels_in(c);
    const auto scope = ids_of(labels);
    const StageSpec stage = spec_.leaf(c);
    if (labels.size() == 2) {
      make_node(leaf_prefix(c) + labels[0].name + "_vs_" + labels[1].name, NodeRole::Leaf, c,
                stage, scope, {labels[0].id});
    } else if (labels.size() > 2 && spec_.strategy == LeafStrategy::OneVsRest) {
      for (const auto& l : labels)
        make_node(leaf_prefix(c) + l.name + "_vs_rest", NodeRole::Leaf, c, stage, scope, {l.id});
    } else if (labels.size() > 2) {
      for (std::size_t i = 0; i < labels.size(); ++i)
        for (std::size_t j = i + 1; j < labels.size(); ++j)
          make_node(leaf_prefix(c) + labels[i].name + "_vs_" + labels[j].name, NodeRole::Leaf, c,
                    stage, {labels[i].id, labels[j].id}, {labels[i].id});
    }
  }
}

const CascadeNode& Cascade::node(std::string_view id) const {
  for (const auto& n : nodes_)
    if (n.id == id) return n;
  throw SpecError("no cascade node '" + std::string(id) + "'");
}

std::size_t Cascade::max_window_len() const {
  std::size_t m = 0;
  for (const auto& n : nodes_) m = std::max(m, n.model.window().size());
  return m;
}

std::vector<std::size_t> Cascade::leaf_nodes(IntensityClass c) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    if (nodes_[i].role == NodeRole::Leaf && nodes_[i].intensity == c) out.push_back(i);
  return out;
}

std::vector<double> Cascade::node_input(const CascadeNode& node, const Segment& seg) const {
  StageInputs in{seg, *this};
  return in.input(node.stage);
}

IntensityClass Cascade::route(StageInputs& in, Decision* d) const {
  auto eval = [&](const CascadeNode& n) {
    const auto p = n.model.predict(in.input(n.stage));
    if (d) {
      d->path.push_back({n.id, p.margin});
      d->rates_used.push_back(spec_.rates.at(n.stage.tier));
      d->levels_used.push_back(n.stage.level);
    }
    return p.label == BinaryLabel::Positive;
  };
  if (eval(nodes_[0])) return IntensityClass::Low;
  return eval(nodes_[1]) ? IntensityClass::Medium : IntensityClass::High;
}

ActivityLabel Cascade::resolve_leaf(IntensityClass c, StageInputs& in, Decision* d) const {
  const auto labels = spec_.labels_in(c);
  if (labels.size() == 1) return labels.front();

  const auto leaves = leaf_nodes(c);
  if (leaves.empty())
    throw SpecError("no discriminator for intensity '" + std::string(to_string(c)) + "'");

  const StageSpec stage = spec_.leaf(c);
  const auto& x = in.input(stage);
  if (d) {
    d->rates_used.push_back(spec_.rates.at(stage.tier));
    d->levels_used.push_back(stage.level);
  }

  std::vector<double> margins;
  for (std::size_t idx : leaves) {
    const auto& n = nodes_[idx];
    const double m = n.model.predict(x).margin;
    margins.push_back(m);
    if (d) d->path.push_back({n.id, m});
  }

  if (labels.size() == 2) return margins[0] >= 0.0 ? labels[0] : labels[1];

  if (spec_.strategy == LeafStrategy::OneVsRest) {
    // labels are sorted by id, so strict > keeps the lowest id on ties
    std::size_t best = 0;
    for (std::size_t i = 1; i < margins.size(); ++i)
      if (margins[i] > margins[best]) best = i;
    return labels[best];
  }

  std::vector<int> votes(labels.size(), 0);
  std::size_t node = 0;
  for (std::size_t i = 0; i < labels.size(); ++i)
    for (std::size_t j = i + 1; j < labels.size(); ++j, ++node)
      ++votes[margins[node] >= 0.0 ? i : j];
  const auto best = std::max_element(votes.begin(), votes.end()) - votes.begin();
  return labels[static_cast<std::size_t>(best)];
}

Classification Cascade::classify(const Segment& seg) const {
  if (seg.rate() != spec_.rates.high)
    throw RateError("cascade input must be recorded at " + std::to_string(spec_.rates.high.hz()) +
                    " Hz, got " + std::to_string(seg.rate().hz()) + " Hz");
  if (seg.channels() != channels_)
    throw DomainError("cascade expects " + std::to_string(channels_) + " channels, got " +
                      std::to_string(seg.channels()));

  StageInputs in{seg, *this};
  Classification out;
  Decision& d = out.decision;
  const IntensityClass branch = route(in, &d);
  d.label = resolve_leaf(branch, in, &d);

  // Charge the branch: sensing at the branch rate, plus the feature levels
  // evaluated at that rate (gate of the branch, then its leaves).
  const Segment& at_rate = in.at(spec_.leaf(branch).tier);
  std::uint64_t ops = 0;
  if (branch == IntensityClass::Low) ops += feature_op_count(spec_.gate_low.level, at_rate);
  if (branch == IntensityClass::Medium) ops += feature_op_count(spec_.gate_medium.level, at_rate);
  if (spec_.labels_in(branch).size() >= 2) ops += feature_op_count(spec_.leaf(branch).level, at_rate);
  out.cost.charge(branch, seg.duration_s(), at_rate.rows() * at_rate.channels(), ops);
  return out;
}

Classification Cascade::classify_and_advance(const Segment& seg) {
  auto c = classify(seg);
  current_rate_ = c.decision.rates_used.back();
  return c;
}

IntensityClass Cascade::route_only(const Segment& seg) const {
  if (seg.rate() != spec_.rates.high) throw RateError("cascade input must be at the high rate");
  if (seg.channels() != channels_) throw DomainError("channel count mismatch");
  StageInputs in{seg, *this};
  return route(in, nullptr);
}

void Cascade::train_segment(const LabeledSegment& ls) {
  const auto known = spec_.find_label(ls.label.id);
  if (!known || known->intensity != ls.label.intensity)
    throw DomainError("label '" + ls.label.name + "' is not part of the cascade's label space");
  if (ls.segment.rate() != spec_.rates.high) throw RateError("training segment must be at the high rate");
  if (ls.segment.channels() != channels_) throw DomainError("channel count mismatch");

  StageInputs in{ls.segment, *this};
  for (auto& n : nodes_) {
    if (!n.in_scope(ls.label.id)) continue;
    const auto y = n.is_positive(ls.label.id) ? BinaryLabel::Positive : BinaryLabel::Negative;
    n.model.observe(in.input(n.stage), y);
    n.model.step();
  }
}

std::vector<Classification> classify_batch_serial(const Cascade& cascade,
                                                  std::span<const Segment> segs) {
  std::vector<Classification> out;
  out.reserve(segs.size());
  for (const auto& s : segs) out.push_back(cascade.classify(s));
  return out;
}

std::vector<Classification> classify_batch(const Cascade& cascade, std::span<const Segment> segs) {
  std::vector<Classification> out(segs.size());
  const auto n = static_cast<std::ptrdiff_t>(segs.size());
  std::exception_ptr err;
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = cascade.classify(segs[static_cast<std::size_t>(i)]);
    } catch (...) {
#pragma omp critical
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  return out;
}

}  // namespace har
