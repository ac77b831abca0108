#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "har/cascade_spec.hpp"
#include "har/costmodel.hpp"
#include "har/pegasos.hpp"
#include "har/signal.hpp"

namespace har {

enum class NodeRole { GateLow, GateMedium, Leaf };

/// One binary classifier in the cascade. `scope` lists the label ids the node
/// trains on; a segment is a positive example iff its label is in `positives`.
struct CascadeNode {
  std::string id;
  NodeRole role;
  IntensityClass intensity;  // leaves: their class; gates: the class they branch off
  StageSpec stage;
  std::vector<int> scope;
  std::vector<int> positives;
  PegasosModel model;

  bool in_scope(int label_id) const;
  bool is_positive(int label_id) const;
};

struct PathStep {
  std::string node;
  double margin;
};

struct Decision {
  ActivityLabel label;
  std::vector<PathStep> path;
  std::vector<SamplingRate> rates_used;
  std::vector<FeatureLevel> levels_used;
};

struct Classification {
  Decision decision;
  CostLedger cost;
};

/// Runtime state of the cascade: one Pegasos model per node.
///
/// classify() and route_only() are read-only and may run concurrently.
/// train_segment() needs exclusive access.
class Cascade {
 public:
  Cascade(CascadeSpec spec, std::size_t channels);

  /// `seg` must be recorded at the high rate; each stage decimates it.
  Classification classify(const Segment& seg) const;
  IntensityClass route_only(const Segment& seg) const;

  /// Same as classify(), and remembers the rate the sensor ends on.
  Classification classify_and_advance(const Segment& seg);

  /// Online update of every node whose scope contains the segment's label:
  /// observe the node's features, then take one step.
  void train_segment(const LabeledSegment& ls);

  /// Input vector a node sees for a full-rate segment (features + optional bias).
  std::vector<double> node_input(const CascadeNode& node, const Segment& seg) const;

  const CascadeSpec& spec() const { return spec_; }
  std::size_t channels() const { return channels_; }
  const std::vector<CascadeNode>& nodes() const { return nodes_; }
  std::vector<CascadeNode>& mutable_nodes() { return nodes_; }
  const CascadeNode& node(std::string_view id) const;
  SamplingRate current_rate() const { return current_rate_; }

  /// Largest window currently held by any node.
  std::size_t max_window_len() const;

 private:
  struct StageInputs;

  IntensityClass route(StageInputs& in, Decision* d) const;
  ActivityLabel resolve_leaf(IntensityClass c, StageInputs& in, Decision* d) const;
  std::vector<std::size_t> leaf_nodes(IntensityClass c) const;

  CascadeSpec spec_;
  std::size_t channels_;
  std::vector<CascadeNode> nodes_;
  SamplingRate current_rate_;
};

// Batch classification over independent segments. The OpenMP version
// distributes segments over threads; the serial one is the reference.
std::vector<Classification> classify_batch(const Cascade& cascade, std::span<const Segment> segs);
std::vector<Classification> classify_batch_serial(const Cascade& cascade,
                                                  std::span<const Segment> segs);

}  // namespace har
