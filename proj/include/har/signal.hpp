#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace har {

/// Samples per second. Always strictly positive.
class SamplingRate {
 public:
  explicit SamplingRate(int hz);
  int hz() const { return hz_; }
  friend auto operator<=>(const SamplingRate&, const SamplingRate&) = default;

 private:
  int hz_;
};

enum class IntensityClass { Low = 0, Medium = 1, High = 2 };

inline constexpr IntensityClass kIntensities[] = {IntensityClass::Low, IntensityClass::Medium,
                                                  IntensityClass::High};

std::string_view to_string(IntensityClass c);
IntensityClass parse_intensity(std::string_view s);

struct ActivityLabel {
  int id = 0;
  std::string name;
  IntensityClass intensity = IntensityClass::Low;

  friend bool operator==(const ActivityLabel&, const ActivityLabel&) = default;
};

/// One fixed-duration window of multichannel samples.
///
/// Storage is column-major so each channel is a contiguous span. Row count is
/// tied to rate and duration: rows == round(rate * duration_s).
class Segment {
 public:
  Segment(std::vector<double> column_major, std::size_t rows, std::size_t channels,
          SamplingRate rate, double duration_s);

  /// Builds a segment from row-major samples (one row per time step).
  static Segment from_rows(const std::vector<std::vector<double>>& rows, SamplingRate rate);

  std::size_t rows() const { return rows_; }
  std::size_t channels() const { return channels_; }
  SamplingRate rate() const { return rate_; }
  double duration_s() const { return duration_s_; }

  std::span<const double> channel(std::size_t c) const {
    return {data_.data() + c * rows_, rows_};
  }
  double at(std::size_t row, std::size_t c) const { return data_[c * rows_ + row]; }

  friend bool operator==(const Segment&, const Segment&) = default;

 private:
  std::vector<double> data_;
  std::size_t rows_;
  std::size_t channels_;
  SamplingRate rate_;
  double duration_s_;
};

struct LabeledSegment {
  Segment segment;
  ActivityLabel label;
};

/// Reduces the rate by index selection: output row j is input row
/// round(j * source_hz / target_hz), clamped to the last row. No filtering.
Segment decimate(const Segment& seg, SamplingRate target);

/// Source row picked for output row j; exposed for tests and the cost model.
std::size_t decimation_index(std::size_t j, int source_hz, int target_hz, std::size_t source_rows);

/// Splits a row-major sample matrix into consecutive non-overlapping windows.
/// A trailing partial window is dropped.
std::vector<Segment> segment_stream(const std::vector<std::vector<double>>& samples,
                                    SamplingRate rate, double window_s);

}  // namespace har
