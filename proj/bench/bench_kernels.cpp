// Serial reference vs OpenMP kernels for batch feature extraction and batch
// cascade classification.
//
//   har_bench [segments_per_activity] [repeats]

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>

#include "har/cascade.hpp"
#include "har/config.hpp"
#include "har/dataset.hpp"
#include "har/experiment.hpp"
#include "har/features.hpp"

namespace {

double time_ms(const std::function<void()>& fn, int repeats) {
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < repeats; ++i) fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / repeats;
}

void row(const char* name, double serial, double parallel) {
  std::printf("%-28s serial %9.3f ms   omp %9.3f ms   speedup %5.2fx\n", name, serial, parallel,
              serial / parallel);
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t per_activity = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 500;
  const int repeats = argc > 2 ? std::atoi(argv[2]) : 5;

  auto cfg = har::default_run_config();
  cfg.synth.segments_per_activity = per_activity;
  const auto stream = har::load_stream(cfg);
  std::vector<har::Segment> segs;
  segs.reserve(stream.size());
  for (const auto& ls : stream) segs.push_back(ls.segment);

  const auto split = har::stratified_split(stream, cfg.cascade, 0.8, cfg.seed);
  har::Cascade cascade(cfg.cascade, segs.front().channels());
  har::train_cascade(cascade, stream, split.train, 1, cfg.seed);

  std::printf("%zu segments x %zu channels x %zu rows, %d threads, %d repeats\n", segs.size(),
              segs.front().channels(), segs.front().rows(), omp_get_max_threads(), repeats);

  for (auto level : {har::FeatureLevel::L1, har::FeatureLevel::L2, har::FeatureLevel::L3}) {
    std::vector<har::FeatureVector> a, b;
    const double s = time_ms([&] { a = har::extract_batch_serial(segs, level); }, repeats);
    const double p = time_ms([&] { b = har::extract_batch(segs, level); }, repeats);
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i].values != b[i].values) {
        std::fprintf(stderr, "feature mismatch at segment %zu\n", i);
        return 1;
      }
    char name[32];
    std::snprintf(name, sizeof name, "extract %s", std::string(har::to_string(level)).c_str());
    row(name, s, p);
  }

  std::vector<har::Classification> a, b;
  const double s = time_ms([&] { a = har::classify_batch_serial(cascade, segs); }, repeats);
  const double p = time_ms([&] { b = har::classify_batch(cascade, segs); }, repeats);
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].decision.label != b[i].decision.label || !(a[i].cost == b[i].cost)) {
      std::fprintf(stderr, "classification mismatch at segment %zu\n", i);
      return 1;
    }
  row("classify", s, p);
  return 0;
}
