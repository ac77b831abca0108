#include "har/features.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>

#include "har/errors.hpp"

namespace har {

namespace {

constexpr std::array<FeatureId, 1> kLevel1 = {FeatureId::AMP};
constexpr std::array<FeatureId, 3> kLevel2 = {FeatureId::AMP, FeatureId::MNVALUE, FeatureId::STD};

double mean(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double median(std::span<const double> x) {
  std::vector<double> tmp(x.begin(), x.end());
  const std::size_t mid = tmp.size() / 2;
  std::nth_element(tmp.begin(), tmp.begin() + static_cast<std::ptrdiff_t>(mid), tmp.end());
  const double upper = tmp[mid];
  if (tmp.size() % 2 == 1) return upper;
  const double lower = *std::max_element(tmp.begin(), tmp.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

double population_std(std::span<const double> x) {
  const double m = mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(x.size()));
}

double rms(std::span<const double> x) {
  double ss = 0.0;
  for (double v : x) ss += v * v;
  return std::sqrt(ss / static_cast<double>(x.size()));
}

}  // namespace

std::string_view to_string(FeatureId id) {
  switch (id) {
    case FeatureId::AMP: return "AMP";
    case FeatureId::MED: return "MED";
    case FeatureId::MNVALUE: return "MNVALUE";
    case FeatureId::MAX: return "MAX";
    case FeatureId::MIN: return "MIN";
    case FeatureId::P2P: return "P2P";
    case FeatureId::STD: return "STD";
    case FeatureId::RMS: return "RMS";
    case FeatureId::S2E: return "S2E";
  }
  return "?";
}

std::span<const FeatureId> feature_set(FeatureLevel level) {
  switch (level) {
    case FeatureLevel::L1: return kLevel1;
    case FeatureLevel::L2: return kLevel2;
    case FeatureLevel::L3: return kAllFeatures;
  }
  throw DomainError("unknown feature level");
}

std::string_view to_string(FeatureLevel level) {
  switch (level) {
    case FeatureLevel::L1: return "L1";
    case FeatureLevel::L2: return "L2";
    case FeatureLevel::L3: return "L3";
  }
  return "?";
}

FeatureLevel parse_level(std::string_view s) {
  if (s == "L1") return FeatureLevel::L1;
  if (s == "L2") return FeatureLevel::L2;
  if (s == "L3") return FeatureLevel::L3;
  throw DomainError("unknown feature level '" + std::string(s) + "'");
}

double compute_feature(FeatureId id, std::span<const double> channel) {
  if (channel.empty()) throw DomainError("feature of an empty channel");
  if (!std::all_of(channel.begin(), channel.end(), [](double v) { return std::isfinite(v); }))
    throw DomainError("feature of a non-finite channel");
  const auto [lo, hi] = std::minmax_element(channel.begin(), channel.end());
  switch (id) {
    case FeatureId::AMP: return std::max(std::fabs(*lo), std::fabs(*hi));
    case FeatureId::MED: return median(channel);
    case FeatureId::MNVALUE: return mean(channel);
    case FeatureId::MAX: return *hi;
    case FeatureId::MIN: return *lo;
    case FeatureId::P2P: return *hi - *lo;
    case FeatureId::STD: return population_std(channel);
    case FeatureId::RMS: return rms(channel);
    case FeatureId::S2E: return channel.back() - channel.front();
  }
  throw DomainError("unknown feature id");
}

FeatureVector extract(const Segment& seg, FeatureLevel level) {
  const auto ids = feature_set(level);
  FeatureVector fv;
  fv.level = level;
  fv.channel_count = seg.channels();
  fv.values.reserve(seg.channels() * ids.size());
  for (std::size_t c = 0; c < seg.channels(); ++c) {
    const auto ch = seg.channel(c);
    for (FeatureId id : ids) fv.values.push_back(compute_feature(id, ch));
  }
  return fv;
}

std::uint64_t feature_op_count(FeatureLevel level, std::size_t channels, std::size_t rows) {
  return static_cast<std::uint64_t>(feature_set(level).size()) * channels * rows;
}

std::uint64_t feature_op_count(FeatureLevel level, const Segment& seg) {
  return feature_op_count(level, seg.channels(), seg.rows());
}

std::vector<FeatureVector> extract_batch_serial(std::span<const Segment> segs, FeatureLevel level) {
  std::vector<FeatureVector> out;
  out.reserve(segs.size());
  for (const auto& s : segs) out.push_back(extract(s, level));
  return out;
}

std::vector<FeatureVector> extract_batch(std::span<const Segment> segs, FeatureLevel level) {
  std::vector<FeatureVector> out(segs.size());
  const auto n = static_cast<std::ptrdiff_t>(segs.size());
  // Exceptions may not cross the parallel region; capture the first one.
  std::exception_ptr err;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = extract(segs[static_cast<std::size_t>(i)], level);
    } catch (...) {
#pragma omp critical
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  return out;
}

}  // namespace har
