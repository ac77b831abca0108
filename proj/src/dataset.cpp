#include "har/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include "har/errors.hpp"

namespace har {

namespace fs = std::filesystem;

namespace {

std::vector<fs::path> sorted_entries(const fs::path& dir, bool want_dirs) {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (want_dirs ? e.is_directory() : e.is_regular_file()) out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> parse_row(const std::string& line, const fs::path& file, std::size_t lineno) {
  std::vector<double> row;
  std::size_t i = 0;
  const std::size_t n = line.size();
  auto is_sep = [](char c) { return c == ' ' || c == '\t' || c == ',' || c == '\r'; };
  while (i < n) {
    while (i < n && is_sep(line[i])) ++i;
    if (i >= n) break;
    std::size_t j = i;
    while (j < n && !is_sep(line[j])) ++j;
    double v = 0.0;
    const char* first = line.data() + i;
    const char* last = line.data() + j;
    if (*first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
      throw IngestError(file.string() + ":" + std::to_string(lineno) + ": non-numeric token '" +
                        line.substr(i, j - i) + "'");
    }
    row.push_back(v);
    i = j;
  }
  return row;
}

}  // namespace

Segment read_segment_file(const fs::path& file, SamplingRate rate, std::size_t expected_rows) {
  std::ifstream in(file);
  if (!in) throw IngestError(file.string() + ": cannot open");
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto row = parse_row(line, file, lineno);
    if (row.empty()) continue;
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw IngestError(file.string() + ":" + std::to_string(lineno) + ": ragged row with " +
                        std::to_string(row.size()) + " columns, expected " +
                        std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.size() != expected_rows) {
    throw IngestError(file.string() + ": " + std::to_string(rows.size()) + " rows, expected " +
                      std::to_string(expected_rows));
  }
  try {
    return Segment::from_rows(rows, rate);
  } catch (const std::invalid_argument& e) {
    throw IngestError(file.string() + ": " + e.what());
  }
}

std::vector<LabeledSegment> ingest(const fs::path& root, const CascadeSpec& spec, double window_s) {
  if (!fs::is_directory(root)) throw IngestError(root.string() + ": not a directory");
  const auto expected_rows = static_cast<std::size_t>(std::llround(window_s * spec.rates.high.hz()));

  std::vector<LabeledSegment> out;
  std::size_t channels = 0;
  for (const auto& dir : sorted_entries(root, true)) {
    const auto name = dir.filename().string();
    const ActivityLabel* label = spec.find_label(name);
    if (!label) throw IngestError(dir.string() + ": directory does not name a configured activity");
    for (const auto& file : sorted_entries(dir, false)) {
      Segment seg = read_segment_file(file, spec.rates.high, expected_rows);
      if (channels == 0) channels = seg.channels();
      if (seg.channels() != channels) {
        throw IngestError(file.string() + ": " + std::to_string(seg.channels()) +
                          " channels, dataset has " + std::to_string(channels));
      }
      out.push_back({std::move(seg), *label});
    }
  }
  if (out.empty()) std::cerr << "warning: no segments found under " << root.string() << "\n";
  return out;
}

void write_dataset(const fs::path& root, const std::vector<LabeledSegment>& stream) {
  fs::create_directories(root);
  std::size_t index = 0;
  char buf[64];
  for (const auto& ls : stream) {
    const auto dir = root / ls.label.name;
    fs::create_directories(dir);
    std::snprintf(buf, sizeof buf, "seg_%05zu.txt", index++);
    std::ofstream out(dir / buf);
    if (!out) throw IngestError((dir / buf).string() + ": cannot write");
    const auto& s = ls.segment;
    for (std::size_t r = 0; r < s.rows(); ++r) {
      for (std::size_t c = 0; c < s.channels(); ++c) {
        std::snprintf(buf, sizeof buf, "%.17g", s.at(r, c));
        if (c) out << ' ';
        out << buf;
      }
      out << '\n';
    }
  }
}

namespace {

struct Envelope {
  double lo, hi;
};

// Bounds on the largest per-channel AMP of one activity's segments: some sample
// of a full sinusoid cycle sits on the offset's side, and no sample exceeds
// offset + amplitude + noise.
Envelope envelope(const SynthActivity& a, double noise) {
  double peak = 0.0;
  for (double o : a.offset) peak = std::max(peak, std::fabs(o));
  return {peak - noise, peak + a.amplitude + noise};
}

const SynthActivity* find_activity(const SynthParams& p, const std::string& name) {
  for (const auto& a : p.activities)
    if (a.name == name) return &a;
  return nullptr;
}

}  // namespace

void validate_synth(const SynthParams& p, const CascadeSpec& spec) {
  if (p.channels == 0) throw ConfigError("synthetic.channels must be positive");
  if (p.segments_per_activity == 0) throw ConfigError("synthetic.segments_per_activity must be positive");
  if (p.noise < 0.0) throw ConfigError("synthetic.noise must be non-negative");

  for (const auto& l : spec.labels) {
    const auto* a = find_activity(p, l.name);
    if (!a) throw ConfigError("no synthetic parameters for activity '" + l.name + "'");
    if (a->offset.size() != p.channels)
      throw ConfigError("activity '" + l.name + "' offset has wrong channel count");
    if (a->amplitude < 0.0 || a->frequency_hz < 0.0)
      throw ConfigError("activity '" + l.name + "' has negative amplitude or frequency");
  }
  if (!p.require_separable) return;

  std::array<Envelope, 3> hull{};
  std::array<bool, 3> seen{};
  for (const auto& l : spec.labels) {
    const auto e = envelope(*find_activity(p, l.name), p.noise);
    auto& h = hull[static_cast<std::size_t>(l.intensity)];
    auto& s = seen[static_cast<std::size_t>(l.intensity)];
    h = s ? Envelope{std::min(h.lo, e.lo), std::max(h.hi, e.hi)} : e;
    s = true;
  }
  if (!(hull[0].hi < hull[1].lo) || !(hull[1].hi < hull[2].lo))
    throw ConfigError("synthetic intensity envelopes overlap; tiers are not AMP-separable");

  for (IntensityClass c : kIntensities) {
    const auto labels = spec.labels_in(c);
    for (std::size_t i = 0; i < labels.size(); ++i) {
      for (std::size_t j = i + 1; j < labels.size(); ++j) {
        const auto* a = find_activity(p, labels[i].name);
        const auto* b = find_activity(p, labels[j].name);
        if (a->offset == b->offset && a->amplitude == b->amplitude)
          throw ConfigError("activities '" + a->name + "' and '" + b->name +
                            "' share offset and amplitude; mean and spread cannot separate them");
      }
    }
  }
}

std::vector<LabeledSegment> synth(const SynthParams& p, const CascadeSpec& spec, double window_s,
                                  std::uint64_t seed) {
  validate_synth(p, spec);
  const SamplingRate rate = spec.rates.high;
  const auto rows = static_cast<std::size_t>(std::llround(window_s * rate.hz()));

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase_dist(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> noise_dist(-p.noise, p.noise);

  auto labels = spec.labels;
  std::sort(labels.begin(), labels.end(), [](const auto& a, const auto& b) { return a.id < b.id; });

  std::vector<LabeledSegment> out;
  out.reserve(labels.size() * p.segments_per_activity);
  for (const auto& label : labels) {
    const auto& act = *find_activity(p, label.name);
    for (std::size_t s = 0; s < p.segments_per_activity; ++s) {
      std::vector<double> data(rows * p.channels);
      for (std::size_t c = 0; c < p.channels; ++c) {
        const double phase = phase_dist(rng);
        for (std::size_t r = 0; r < rows; ++r) {
          const double t = static_cast<double>(r) / rate.hz();
          const double clean =
              act.offset[c] + act.amplitude * std::sin(2.0 * std::numbers::pi * act.frequency_hz * t + phase);
          data[c * rows + r] = p.noise > 0.0 ? clean + noise_dist(rng) : clean;
        }
      }
      out.push_back({Segment(std::move(data), rows, p.channels, rate, window_s), label});
    }
  }
  return out;
}

std::vector<LabeledSegment> load_stream(const RunConfig& cfg) {
  if (cfg.dataset) return ingest(*cfg.dataset, cfg.cascade, cfg.window_s);
  return synth(cfg.synth, cfg.cascade, cfg.window_s, cfg.seed);
}

}  // namespace har
