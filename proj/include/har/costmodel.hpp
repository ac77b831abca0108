#pragma once

#include <array>
#include <cstdint>

#include "har/cascade_spec.hpp"

namespace har {

struct BranchCost {
  double duration_s = 0.0;
  std::uint64_t sensed = 0;
  std::uint64_t feature_ops = 0;

  friend bool operator==(const BranchCost&, const BranchCost&) = default;
};

/// Cumulative sensing and feature-computation unit counts, split by the
/// intensity branch that was charged. Merging is plain addition.
struct CostLedger {
  std::array<BranchCost, 3> per_branch{};  // indexed by IntensityClass

  void charge(IntensityClass branch, double duration_s, std::uint64_t sensed,
              std::uint64_t feature_ops);
  CostLedger& operator+=(const CostLedger& other);

  const BranchCost& branch(IntensityClass c) const {
    return per_branch[static_cast<std::size_t>(c)];
  }
  std::uint64_t sensed_samples() const;
  std::uint64_t feature_ops() const;
  std::uint64_t total() const { return sensed_samples() + feature_ops(); }
  double duration_s() const;

  friend bool operator==(const CostLedger&, const CostLedger&) = default;
};

struct CostBreakdown {
  double sensing = 0.0;
  double compute = 0.0;
  double total() const { return sensing + compute; }
};

/// Single-rate, single-level recognizer: every second costs rate*channels
/// sensing units plus rate*channels*|level| feature units.
CostBreakdown monolithic_cost(SamplingRate rate, FeatureLevel level, std::size_t channels,
                              double duration_s);

/// Seconds of activity per intensity class.
using IntensityMix = std::array<double, 3>;

/// Cascade cost for a duration mix. Each branch pays sensing at its leaf rate
/// plus the feature levels evaluated at that rate: the low branch pays the low
/// gate and low leaves, the medium branch pays the medium gate and medium
/// leaves, the high branch pays only its leaves. Leaves are skipped for an
/// intensity class with a single label.
CostBreakdown cascade_cost(const CascadeSpec& spec, const IntensityMix& mix, std::size_t channels);

struct Savings {
  CostBreakdown monolithic;
  CostBreakdown cascade;
  double sensing_pct = 0.0;  // 100 * (1 - cascade/monolithic)
  double compute_pct = 0.0;
  double total_pct = 0.0;
};

/// Compares cascade_cost against a monolithic recognizer at the high rate with L3.
Savings compare_to_monolithic(const CascadeSpec& spec, const IntensityMix& mix,
                              std::size_t channels);

struct BudgetSpec {
  double theta = 0.0;    // cost units per second
  double epsilon = 0.0;  // cumulative misclassifications
  std::size_t k = 0;     // memory blocks

  void validate() const;
};

struct BudgetReport {
  bool power_ok = false;
  bool error_ok = false;
  bool memory_ok = false;
  double units_per_second = 0.0;
};

BudgetReport check_budgets(const CostLedger& ledger, const BudgetSpec& budgets, double elapsed_s,
                           std::uint64_t errors_seen, std::size_t window_len);

}  // namespace har
