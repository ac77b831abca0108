#include "har/signal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "har/errors.hpp"

namespace har {

SamplingRate::SamplingRate(int hz) : hz_(hz) {
  if (hz <= 0) throw DomainError("sampling rate must be positive, got " + std::to_string(hz));
}

std::string_view to_string(IntensityClass c) {
  switch (c) {
    case IntensityClass::Low: return "low";
    case IntensityClass::Medium: return "medium";
    case IntensityClass::High: return "high";
  }
  return "?";
}

IntensityClass parse_intensity(std::string_view s) {
  if (s == "low") return IntensityClass::Low;
  if (s == "medium") return IntensityClass::Medium;
  if (s == "high") return IntensityClass::High;
  throw DomainError("unknown intensity class '" + std::string(s) + "'");
}

Segment::Segment(std::vector<double> column_major, std::size_t rows, std::size_t channels,
                 SamplingRate rate, double duration_s)
    : data_(std::move(column_major)),
      rows_(rows),
      channels_(channels),
      rate_(rate),
      duration_s_(duration_s) {
  if (channels_ == 0) throw DomainError("segment needs at least one channel");
  if (data_.size() != rows_ * channels_) throw DomainError("segment data size does not match shape");
  if (!(duration_s_ > 0.0)) throw DomainError("segment duration must be positive");
  const double expected = std::round(rate_.hz() * duration_s_);
  if (static_cast<double>(rows_) != expected) {
    throw DomainError("segment has " + std::to_string(rows_) + " rows, expected " +
                      std::to_string(static_cast<long long>(expected)) + " at " +
                      std::to_string(rate_.hz()) + " Hz");
  }
  if (!std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); }))
    throw DomainError("segment contains non-finite samples");
}

Segment Segment::from_rows(const std::vector<std::vector<double>>& rows, SamplingRate rate) {
  if (rows.empty()) throw DomainError("segment needs at least one row");
  const std::size_t n = rows.size();
  const std::size_t ch = rows.front().size();
  std::vector<double> data(n * ch);
  for (std::size_t r = 0; r < n; ++r) {
    if (rows[r].size() != ch) throw DomainError("ragged row " + std::to_string(r));
    for (std::size_t c = 0; c < ch; ++c) data[c * n + r] = rows[r][c];
  }
  return Segment(std::move(data), n, ch, rate, static_cast<double>(n) / rate.hz());
}

std::size_t decimation_index(std::size_t j, int source_hz, int target_hz, std::size_t source_rows) {
  // round-half-up of j*source/target in integer arithmetic
  const auto num = 2 * j * static_cast<std::size_t>(source_hz) + static_cast<std::size_t>(target_hz);
  const auto idx = num / (2 * static_cast<std::size_t>(target_hz));
  return std::min(idx, source_rows - 1);
}

Segment decimate(const Segment& seg, SamplingRate target) {
  const int src = seg.rate().hz();
  if (target.hz() > src) {
    throw RateError("cannot decimate " + std::to_string(src) + " Hz to " +
                    std::to_string(target.hz()) + " Hz");
  }
  if (target == seg.rate()) return seg;

  const std::size_t out_rows =
      (2 * static_cast<std::size_t>(target.hz()) * seg.rows() + static_cast<std::size_t>(src)) /
      (2 * static_cast<std::size_t>(src));
  std::vector<double> out(out_rows * seg.channels());
  for (std::size_t c = 0; c < seg.channels(); ++c) {
    const auto in = seg.channel(c);
    for (std::size_t j = 0; j < out_rows; ++j)
      out[c * out_rows + j] = in[decimation_index(j, src, target.hz(), seg.rows())];
  }
  return Segment(std::move(out), out_rows, seg.channels(), target, seg.duration_s());
}

std::vector<Segment> segment_stream(const std::vector<std::vector<double>>& samples,
                                    SamplingRate rate, double window_s) {
  const double rows_d = window_s * rate.hz();
  if (!(window_s > 0.0) || rows_d != std::floor(rows_d))
    throw DomainError("window length times rate must be a positive integer");
  const auto per = static_cast<std::size_t>(rows_d);

  std::vector<Segment> out;
  for (std::size_t start = 0; start + per <= samples.size(); start += per) {
    std::vector<std::vector<double>> window(samples.begin() + static_cast<std::ptrdiff_t>(start),
                                            samples.begin() + static_cast<std::ptrdiff_t>(start + per));
    out.push_back(Segment::from_rows(window, rate));
  }
  return out;
}

}  // namespace har
