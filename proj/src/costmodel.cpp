#include "har/costmodel.hpp"

#include <cmath>

#include "har/errors.hpp"

namespace har {

void CostLedger::charge(IntensityClass branch, double duration_s, std::uint64_t sensed,
                        std::uint64_t feature_ops) {
  auto& b = per_branch[static_cast<std::size_t>(branch)];
  b.duration_s += duration_s;
  b.sensed += sensed;
  b.feature_ops += feature_ops;
}

CostLedger& CostLedger::operator+=(const CostLedger& other) {
  for (std::size_t i = 0; i < per_branch.size(); ++i) {
    per_branch[i].duration_s += other.per_branch[i].duration_s;
    per_branch[i].sensed += other.per_branch[i].sensed;
    per_branch[i].feature_ops += other.per_branch[i].feature_ops;
  }
  return *this;
}

std::uint64_t CostLedger::sensed_samples() const {
  std::uint64_t s = 0;
  for (const auto& b : per_branch) s += b.sensed;
  return s;
}

std::uint64_t CostLedger::feature_ops() const {
  std::uint64_t s = 0;
  for (const auto& b : per_branch) s += b.feature_ops;
  return s;
}

double CostLedger::duration_s() const {
  double s = 0.0;
  for (const auto& b : per_branch) s += b.duration_s;
  return s;
}

CostBreakdown monolithic_cost(SamplingRate rate, FeatureLevel level, std::size_t channels,
                              double duration_s) {
  const double samples = duration_s * rate.hz() * static_cast<double>(channels);
  return {samples, samples * static_cast<double>(feature_set(level).size())};
}

CostBreakdown cascade_cost(const CascadeSpec& spec, const IntensityMix& mix, std::size_t channels) {
  CostBreakdown out;
  for (IntensityClass c : kIntensities) {
    const double seconds = mix[static_cast<std::size_t>(c)];
    if (seconds < 0.0) throw DomainError("negative duration in intensity mix");
    const StageSpec& leaf = spec.leaf(c);
    const double samples = seconds * spec.rates.at(leaf.tier).hz() * static_cast<double>(channels);

    std::size_t per_sample = 0;
    if (c == IntensityClass::Low) per_sample += feature_set(spec.gate_low.level).size();
    if (c == IntensityClass::Medium) per_sample += feature_set(spec.gate_medium.level).size();
    if (spec.labels_in(c).size() >= 2) per_sample += feature_set(leaf.level).size();

    out.sensing += samples;
    out.compute += samples * static_cast<double>(per_sample);
  }
  return out;
}

Savings compare_to_monolithic(const CascadeSpec& spec, const IntensityMix& mix,
                              std::size_t channels) {
  Savings s;
  const double total = mix[0] + mix[1] + mix[2];
  s.monolithic = monolithic_cost(spec.rates.high, FeatureLevel::L3, channels, total);
  s.cascade = cascade_cost(spec, mix, channels);
  auto pct = [](double part, double whole) { return whole > 0.0 ? 100.0 * (1.0 - part / whole) : 0.0; };
  s.sensing_pct = pct(s.cascade.sensing, s.monolithic.sensing);
  s.compute_pct = pct(s.cascade.compute, s.monolithic.compute);
  s.total_pct = pct(s.cascade.total(), s.monolithic.total());
  return s;
}

void BudgetSpec::validate() const {
  if (!(theta > 0.0) || !(epsilon > 0.0) || k == 0)
    throw DomainError("budgets theta, epsilon and k must be positive");
}

BudgetReport check_budgets(const CostLedger& ledger, const BudgetSpec& budgets, double elapsed_s,
                           std::uint64_t errors_seen, std::size_t window_len) {
  if (!(elapsed_s > 0.0)) throw DomainError("elapsed time must be positive");
  BudgetReport r;
  r.units_per_second = static_cast<double>(ledger.total()) / elapsed_s;
  r.power_ok = r.units_per_second <= budgets.theta;
  r.error_ok = static_cast<double>(errors_seen) <= budgets.epsilon;
  r.memory_ok = window_len <= budgets.k;
  return r;
}

}  // namespace har
