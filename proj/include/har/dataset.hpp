#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "har/cascade_spec.hpp"
#include "har/config.hpp"
#include "har/signal.hpp"

namespace har {

/// Reads `root/<activity name>/<file>` segment files. Each file holds one
/// segment: one row per time step, channels separated by whitespace or commas.
/// Directories and files are visited in lexicographic order. Every file must
/// have exactly rate * window_s rows and the same column count.
std::vector<LabeledSegment> ingest(const std::filesystem::path& root, const CascadeSpec& spec,
                                   double window_s);

/// Parses one segment file. Throws IngestError naming the file.
Segment read_segment_file(const std::filesystem::path& file, SamplingRate rate,
                          std::size_t expected_rows);

/// Writes a stream in the layout ingest() reads, with round-trip precision.
void write_dataset(const std::filesystem::path& root, const std::vector<LabeledSegment>& stream);

/// Throws ConfigError when the parameters are degenerate: missing activity,
/// wrong offset length, or (if separability is requested) overlapping
/// intensity envelopes or indistinguishable activities within a tier.
void validate_synth(const SynthParams& params, const CascadeSpec& spec);

/// Generates segments_per_activity segments per label at the high rate,
/// ordered by label id, reproducible for a given seed.
std::vector<LabeledSegment> synth(const SynthParams& params, const CascadeSpec& spec,
                                  double window_s, std::uint64_t seed);

/// Dataset from config: the directory if configured, otherwise synthetic.
std::vector<LabeledSegment> load_stream(const RunConfig& cfg);

}  // namespace har
