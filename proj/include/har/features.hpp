#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "har/signal.hpp"

namespace har {

enum class FeatureId { AMP, MED, MNVALUE, MAX, MIN, P2P, STD, RMS, S2E };

inline constexpr std::array<FeatureId, 9> kAllFeatures = {
    FeatureId::AMP, FeatureId::MED, FeatureId::MNVALUE, FeatureId::MAX, FeatureId::MIN,
    FeatureId::P2P, FeatureId::STD, FeatureId::RMS,     FeatureId::S2E};

std::string_view to_string(FeatureId id);

/// Nested feature tiers ordered by cost. L1 = {AMP}, L2 = {AMP, MNVALUE, STD},
/// L3 = all nine.
enum class FeatureLevel { L1 = 1, L2 = 2, L3 = 3 };

std::span<const FeatureId> feature_set(FeatureLevel level);
std::string_view to_string(FeatureLevel level);
FeatureLevel parse_level(std::string_view s);

struct FeatureVector {
  std::vector<double> values;  // channel-major: [ch0 features..., ch1 features..., ...]
  FeatureLevel level = FeatureLevel::L1;
  std::size_t channel_count = 0;
};

/// Single feature of one channel. MED averages the two middle values for even
/// length; STD uses the 1/n normalization; AMP is the peak magnitude.
double compute_feature(FeatureId id, std::span<const double> channel);

FeatureVector extract(const Segment& seg, FeatureLevel level);

/// Unit-cost instruction estimate: one op per feature per sample per channel.
std::uint64_t feature_op_count(FeatureLevel level, const Segment& seg);
std::uint64_t feature_op_count(FeatureLevel level, std::size_t channels, std::size_t rows);

// Batch kernels. The OpenMP version parallelizes over segments; the serial one
// is the reference it is tested against.
std::vector<FeatureVector> extract_batch(std::span<const Segment> segs, FeatureLevel level);
std::vector<FeatureVector> extract_batch_serial(std::span<const Segment> segs, FeatureLevel level);

}  // namespace har
