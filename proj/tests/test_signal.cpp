#include <random>

#include "doctest.h"
#include "har/errors.hpp"
#include "har/signal.hpp"
#include "oracles.hpp"

using namespace har;

namespace {

// 25 Hz, 5 s, two channels; channel 0 holds the row index, channel 1 its negation.
Segment ramp_segment(std::size_t rows = 125, int hz = 25) {
  std::vector<std::vector<double>> r(rows);
  for (std::size_t i = 0; i < rows; ++i) r[i] = {double(i), -double(i)};
  return Segment::from_rows(r, SamplingRate(hz));
}

}  // namespace

TEST_CASE("sampling rate rejects non-positive values") {
  CHECK_THROWS_AS(SamplingRate(0), DomainError);
  CHECK_THROWS_AS(SamplingRate(-5), DomainError);
  CHECK(SamplingRate(5) < SamplingRate(12));
}

TEST_CASE("intensity classes are ordered and parse") {
  CHECK(IntensityClass::Low < IntensityClass::Medium);
  CHECK(IntensityClass::Medium < IntensityClass::High);
  CHECK(parse_intensity("medium") == IntensityClass::Medium);
  CHECK_THROWS_AS(parse_intensity("extreme"), DomainError);
}

TEST_CASE("segment validates shape and finiteness") {
  CHECK_THROWS_AS(Segment({}, 0, 0, SamplingRate(25), 1.0), DomainError);
  CHECK_THROWS_AS(Segment(std::vector<double>(24, 0.0), 24, 1, SamplingRate(25), 1.0), DomainError);
  std::vector<double> bad(25, 0.0);
  bad[3] = std::nan("");
  CHECK_THROWS_AS(Segment(bad, 25, 1, SamplingRate(25), 1.0), DomainError);
  CHECK_THROWS_AS(Segment::from_rows({{1.0, 2.0}, {3.0}}, SamplingRate(2)), DomainError);

  const auto s = ramp_segment();
  CHECK(s.rows() == 125);
  CHECK(s.channels() == 2);
  CHECK(s.duration_s() == doctest::Approx(5.0));
  CHECK(s.at(7, 1) == -7.0);
}

TEST_CASE("decimate at the source rate is the identity") {
  const auto s = ramp_segment();
  CHECK(decimate(s, SamplingRate(25)) == s);
}

TEST_CASE("decimate 25 Hz to 5 Hz picks every fifth row") {
  const auto s = ramp_segment();
  const auto d = decimate(s, SamplingRate(5));
  REQUIRE(d.rows() == 25);
  CHECK(d.rate().hz() == 5);
  CHECK(d.channels() == 2);
  for (std::size_t j = 0; j < 25; ++j) {
    CHECK(d.at(j, 0) == double(5 * j));
    CHECK(d.at(j, 1) == -double(5 * j));
  }
}

TEST_CASE("decimate 25 Hz to 12 Hz matches enumerated round(25j/12)") {
  const auto s = ramp_segment();
  const auto d = decimate(s, SamplingRate(12));
  REQUIRE(d.rows() == 60);
  // Frozen from the floating-point oracle; half-way cases (j = 6, 18, ...) round up.
  const std::size_t expected_head[] = {0, 2, 4, 6, 8, 10, 13, 15, 17, 19, 21, 23, 25};
  for (std::size_t j = 0; j < std::size(expected_head); ++j) CHECK(d.at(j, 0) == double(expected_head[j]));
  for (std::size_t j = 0; j < 60; ++j)
    CHECK(d.at(j, 0) == double(oracle::decimation_source(j, 25, 12, 125)));
  CHECK(d.at(59, 0) == 123.0);
}

TEST_CASE("decimate errors") {
  const auto s = ramp_segment(25, 5);
  CHECK_THROWS_AS(decimate(s, SamplingRate(25)), RateError);
  CHECK_THROWS_AS(decimate(s, SamplingRate(0)), DomainError);
}

TEST_CASE("decimate is idempotent and never invents values") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::vector<double>> rows(125, std::vector<double>(3));
    for (auto& r : rows)
      for (auto& v : r) v = u(rng);
    const auto s = Segment::from_rows(rows, SamplingRate(25));
    for (int hz : {5, 12, 17, 25}) {
      const auto d = decimate(s, SamplingRate(hz));
      CHECK(decimate(d, SamplingRate(hz)) == d);
      for (std::size_t c = 0; c < 3; ++c) {
        const auto in = s.channel(c);
        for (double v : d.channel(c)) CHECK(std::find(in.begin(), in.end(), v) != in.end());
      }
    }
  }
}

TEST_CASE("segment_stream splits into non-overlapping windows") {
  auto rows_of = [](std::size_t n) {
    std::vector<std::vector<double>> r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = {double(i)};
    return r;
  };
  const SamplingRate hz(25);

  const auto five_minutes = segment_stream(rows_of(7500), hz, 5.0);
  REQUIRE(five_minutes.size() == 60);
  // prefix coverage, no gaps or overlap
  for (std::size_t k = 0; k < five_minutes.size(); ++k) {
    CHECK(five_minutes[k].rows() == 125);
    CHECK(five_minutes[k].at(0, 0) == double(125 * k));
    CHECK(five_minutes[k].at(124, 0) == double(125 * k + 124));
  }

  CHECK(segment_stream(rows_of(125), hz, 5.0).size() == 1);
  const auto truncated = segment_stream(rows_of(130), hz, 5.0);
  REQUIRE(truncated.size() == 1);
  CHECK(truncated[0].at(124, 0) == 124.0);
  CHECK(segment_stream({}, hz, 5.0).empty());
  CHECK_THROWS_AS(segment_stream(rows_of(10), hz, 0.1), DomainError);
}
