#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "har/config.hpp"
#include "har/dataset.hpp"
#include "har/errors.hpp"
#include "har/experiment.hpp"
#include "har/report.hpp"

using namespace har;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("har_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

RunConfig small_config(std::size_t per_activity = 20) {
  auto cfg = default_run_config();
  cfg.synth.segments_per_activity = per_activity;
  return cfg;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_lines(const fs::path& p, std::size_t rows, std::size_t cols, const char* sep = " ") {
  std::ofstream out(p);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) out << (c ? sep : "") << 0.5 * double(r + c);
    out << "\n";
  }
}

}  // namespace

TEST_CASE("config defaults and json round trip") {
  const auto cfg = run_config_from_json(nlohmann::json::object());
  CHECK(cfg.cascade.labels.size() == 7);
  CHECK(cfg.cascade.rates.low.hz() == 5);
  CHECK(cfg.cascade.rates.medium.hz() == 12);
  CHECK(cfg.cascade.rates.high.hz() == 25);
  CHECK(cfg.cascade.k == 10);
  CHECK(cfg.cascade.lambda == 0.01);
  CHECK(cfg.epochs == 1);
  CHECK(cfg.window_s == 5.0);

  auto j = nlohmann::json::parse(to_json(cfg).dump());
  j["pegasos"]["k"] = 4;
  j["leaf_strategy"] = "pairwise";
  j["stages"]["leaf_medium"]["level"] = "L2";
  const auto changed = run_config_from_json(j);
  CHECK(changed.cascade.k == 4);
  CHECK(changed.cascade.strategy == LeafStrategy::Pairwise);
  CHECK(changed.cascade.leaf(IntensityClass::Medium).level == FeatureLevel::L2);
  CHECK(to_json(run_config_from_json(nlohmann::json::parse(to_json(changed).dump()))) == to_json(changed));
}

TEST_CASE("config errors") {
  using nlohmann::json;
  CHECK_THROWS_AS(run_config_from_json(json{{"pegasos", {{"lambda", -1.0}}}}), ConfigError);
  CHECK_THROWS_AS(run_config_from_json(json{{"leaf_strategy", "tournament"}}), ConfigError);
  CHECK_THROWS_AS(run_config_from_json(json{{"rates", {{"low", 0}}}}), ConfigError);
  CHECK_THROWS_AS(run_config_from_json(json{{"window_s", 0.3}}), ConfigError);
  CHECK_THROWS_AS(run_config_from_json(json{{"labels", {{{"id", 0}}}}}), ConfigError);
  CHECK_THROWS_AS(load_run_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("synth is reproducible and ordered by label") {
  const auto cfg = small_config(10);
  const auto a = synth(cfg.synth, cfg.cascade, 5.0, 17);
  const auto b = synth(cfg.synth, cfg.cascade, 5.0, 17);
  const auto c = synth(cfg.synth, cfg.cascade, 5.0, 18);
  REQUIRE(a.size() == 70);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].segment == b[i].segment);
    CHECK(a[i].label == b[i].label);
  }
  CHECK_FALSE(a[0].segment == c[0].segment);
  CHECK(a[0].label.name == "sitting");
  CHECK(a[69].label.name == "jumping");
  CHECK(a[0].segment.rows() == 125);
  CHECK(a[0].segment.channels() == 3);
}

TEST_CASE("zero-noise synthetic features equal sinusoid closed forms") {
  auto cfg = small_config(3);
  cfg.synth.noise = 0.0;
  for (auto& a : cfg.synth.activities) a.frequency_hz = 1.0;  // five full cycles per window
  const auto stream = synth(cfg.synth, cfg.cascade, 5.0, 5);
  for (const auto& ls : stream) {
    const auto* act = &cfg.synth.activities[0];
    for (const auto& a : cfg.synth.activities)
      if (a.name == ls.label.name) act = &a;
    const auto fv = extract(ls.segment, FeatureLevel::L3).values;
    for (std::size_t c = 0; c < 3; ++c) {
      const double off = act->offset[c], amp = act->amplitude;
      const double* f = &fv[9 * c];
      CHECK(f[2] == doctest::Approx(off).epsilon(1e-12).scale(1.0));             // MNVALUE
      CHECK(f[6] == doctest::Approx(amp / std::numbers::sqrt2).epsilon(1e-12));   // STD
      CHECK(f[7] == doctest::Approx(std::sqrt(off * off + amp * amp / 2)).epsilon(1e-12));  // RMS
      CHECK(f[3] <= off + amp + 1e-12);
      CHECK(f[4] >= off - amp - 1e-12);
      // 25 samples per cycle: the sampled peak is within one phase step of the true peak
      CHECK(f[5] >= 2 * amp * std::cos(std::numbers::pi / 25) - 1e-12);
    }
  }
}

TEST_CASE("synth rejects degenerate parameters") {
  auto cfg = small_config();
  auto overlap = cfg.synth;
  overlap.activities[2].offset = {0.3, 0.0, 0.0};  // medium walking drops into the low band
  CHECK_THROWS_AS(synth(overlap, cfg.cascade, 5.0, 1), ConfigError);
  overlap.require_separable = false;
  CHECK_NOTHROW(synth(overlap, cfg.cascade, 5.0, 1));

  auto twins = cfg.synth;
  twins.activities[1].offset = twins.activities[0].offset;
  CHECK_THROWS_AS(synth(twins, cfg.cascade, 5.0, 1), ConfigError);

  auto missing = cfg.synth;
  missing.activities.pop_back();
  CHECK_THROWS_AS(synth(missing, cfg.cascade, 5.0, 1), ConfigError);

  auto wrong_channels = cfg.synth;
  wrong_channels.channels = 2;
  CHECK_THROWS_AS(synth(wrong_channels, cfg.cascade, 5.0, 1), ConfigError);
}

TEST_CASE("written datasets ingest back identically") {
  const auto root = scratch("roundtrip");
  const auto cfg = small_config(4);
  const auto stream = synth(cfg.synth, cfg.cascade, 5.0, 21);
  write_dataset(root, stream);
  CHECK(std::distance(fs::directory_iterator(root), fs::directory_iterator()) == 7);
  const auto back = ingest(root, cfg.cascade, 5.0);
  REQUIRE(back.size() == stream.size());
  // directories are visited lexicographically, so compare as multisets keyed by label
  std::size_t matched = 0;
  for (const auto& ls : back)
    for (const auto& orig : stream)
      if (orig.label == ls.label && orig.segment == ls.segment) ++matched;
  CHECK(matched == stream.size());
  CHECK(back.front().label.name == "exercising");
}

TEST_CASE("ingest validation names the offending file") {
  auto cfg = small_config();
  const auto root = scratch("ingest");
  CHECK(ingest(root, cfg.cascade, 5.0).empty());

  fs::create_directories(root / "sitting");
  write_lines(root / "sitting" / "a.txt", 125, 3, ",");
  write_lines(root / "sitting" / "b.txt", 125, 3, " \t");
  CHECK(ingest(root, cfg.cascade, 5.0).size() == 2);

  write_lines(root / "sitting" / "c.txt", 124, 3);
  try {
    ingest(root, cfg.cascade, 5.0);
    FAIL("expected IngestError");
  } catch (const IngestError& e) {
    CHECK(std::string(e.what()).find("c.txt") != std::string::npos);
    CHECK(std::string(e.what()).find("124 rows") != std::string::npos);
  }
  fs::remove(root / "sitting" / "c.txt");

  write_lines(root / "sitting" / "d.txt", 125, 2);
  CHECK_THROWS_WITH_AS(ingest(root, cfg.cascade, 5.0), doctest::Contains("d.txt"), IngestError);
  fs::remove(root / "sitting" / "d.txt");

  {
    std::ofstream out(root / "sitting" / "e.txt");
    out << "1 2 3\n1 2\n";
  }
  CHECK_THROWS_WITH_AS(ingest(root, cfg.cascade, 5.0), doctest::Contains("ragged"), IngestError);
  {
    std::ofstream out(root / "sitting" / "e.txt");
    out << "1 2 abc\n";
  }
  CHECK_THROWS_WITH_AS(ingest(root, cfg.cascade, 5.0), doctest::Contains("e.txt:1"), IngestError);
  fs::remove(root / "sitting" / "e.txt");

  fs::create_directories(root / "skating");
  CHECK_THROWS_AS(ingest(root, cfg.cascade, 5.0), IngestError);
}

TEST_CASE("stratified split") {
  const auto cfg = small_config(10);
  const auto stream = synth(cfg.synth, cfg.cascade, 5.0, 1);
  const auto s = stratified_split(stream, cfg.cascade, 0.8, 9);
  CHECK(s.train.size() == 56);
  CHECK(s.test.size() == 14);
  std::vector<int> per_label(7, 0);
  for (auto i : s.test) ++per_label[static_cast<std::size_t>(stream[i].label.id)];
  CHECK(per_label == std::vector<int>(7, 2));
  CHECK_THROWS_AS(stratified_split(stream, cfg.cascade, 0.05, 9), ConfigError);

  auto partial = stream;
  std::erase_if(partial, [](const auto& ls) { return ls.label.id == 3; });
  CHECK_THROWS_AS(stratified_split(partial, cfg.cascade, 0.8, 9), ConfigError);
}

TEST_CASE("train-eval report invariants") {
  const auto cfg = small_config(40);
  const auto r = run_train_eval(cfg);
  CHECK(r.train_count == 224);
  CHECK(r.eval_count == 56);
  CHECK(r.accuracy >= 0.97);
  CHECK(r.max_window_len == 10);
  CHECK(r.window_capacity == 10);

  std::size_t trace = 0, total = 0;
  for (std::size_t i = 0; i < r.confusion.size(); ++i) {
    std::size_t row = 0;
    for (auto v : r.confusion[i]) row += v;
    CHECK(row == 8);  // 20% of 40 per label
    trace += r.confusion[i][i];
    total += row;
  }
  CHECK(static_cast<double>(trace) / static_cast<double>(total) == r.accuracy);
  for (const auto& n : r.nodes) {
    CHECK(n.accuracy >= 0.0);
    CHECK(n.accuracy <= 1.0);
  }
  CHECK(r.ledger_matches_formula);
  CHECK(r.budgets.memory_ok);
  CHECK(r.budgets.power_ok);

  auto k3 = cfg;
  k3.cascade.k = 3;
  k3.budgets.k = 3;
  CHECK(run_train_eval(k3).max_window_len == 3);
}

TEST_CASE("eval-on-train evaluates the training split") {
  auto cfg = small_config(10);
  cfg.split.eval_on_train = true;
  const auto r = run_train_eval(cfg);
  CHECK(r.eval_count == r.train_count);
  CHECK(r.eval_on_train);
}

TEST_CASE("reports are byte-identical for the same seed") {
  const auto cfg = small_config(20);
  const auto a = to_structured(to_json(run_train_eval(cfg)));
  const auto b = to_structured(to_json(run_train_eval(cfg)));
  CHECK(a == b);
  auto other = cfg;
  other.seed = cfg.seed + 1;
  CHECK(to_structured(to_json(run_train_eval(other))) != a);
}

TEST_CASE("confusion csv layout") {
  const auto r = run_train_eval(small_config(10));
  const auto csv = confusion_csv(r);
  CHECK(csv.rfind("true\\predicted,sitting,standing,", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 8);
}

TEST_CASE("level-1 features cannot split sitting from standing; level 2 can") {
  // Both postures share amplitude and differ only in mean, which AMP does not see.
  auto run_leaf = [](FeatureLevel level) {
    auto cfg = small_config(40);
    cfg.cascade.gate_low.level = FeatureLevel::L1;
    cfg.cascade.leaves[0].level = level;
    const auto r = run_train_eval(cfg);
    for (const auto& n : r.nodes)
      if (n.id == "low:sitting_vs_standing") return n.accuracy;
    return -1.0;
  };
  CHECK(run_leaf(FeatureLevel::L1) < 0.8);
  CHECK(run_leaf(FeatureLevel::L2) == 1.0);
}

TEST_CASE("savings report on the uniform synthetic mix") {
  const auto r = report_savings(small_config(10));
  CHECK(r.segments == 70);
  CHECK(r.mix[0] == 100.0);
  CHECK(r.mix[2] == 150.0);
  CHECK(format_pct(r.savings.sensing_pct) == "37.71%");
  CHECK(format_pct(r.savings.compute_pct) == "36.32%");
  const auto j = to_json(r);
  CHECK(j["reference"]["sensing_savings_pct"] == 44.0);
  CHECK(j["reference"]["compute_savings_pct"] == 42.0);
  CHECK(savings_csv(r).find("cascade_sensing,") != std::string::npos);
}

TEST_CASE("models persist and restore exactly") {
  const auto cfg = small_config(10);
  const auto stream = synth(cfg.synth, cfg.cascade, cfg.window_s, cfg.seed);
  const auto trained = train_eval(cfg, stream).cascade;
  const auto text = to_structured(models_to_json(trained));

  Cascade fresh(cfg.cascade, 3);
  load_models(fresh, nlohmann::json::parse(text));
  for (std::size_t i = 0; i < fresh.nodes().size(); ++i) {
    const auto& a = trained.nodes()[i].model;
    const auto& b = fresh.nodes()[i].model;
    CHECK(a.weights() == b.weights());
    CHECK(a.iterations() == b.iterations());
    CHECK(a.window().size() == b.window().size());
    CHECK(a.last_step_size() == b.last_step_size());
  }
  CHECK(to_structured(models_to_json(fresh)) == text);

  auto bad = nlohmann::json::parse(text);
  bad["nodes"][0]["id"] = "nope";
  CHECK_THROWS_AS(load_models(fresh, bad), ConfigError);
}

TEST_CASE("cli: synth-gen then train-eval on the directory") {
  const auto root = scratch("cli");
  const std::string cli = HAR_CLI_PATH;
  auto run = [](const std::string& cmd) { return std::system((cmd + " 2>/dev/null").c_str()); };

  REQUIRE(run(cli + " synth-gen --seed 4 --out " + (root / "data").string()) == 0);
  {
    std::ofstream cfg(root / "cfg.json");
    cfg << R"({"dataset": "data", "seed": 4})";
  }
  const auto cfg = (root / "cfg.json").string();
  REQUIRE(run(cli + " train-eval --config " + cfg + " --out " + (root / "a.json").string() +
              " --save-models " + (root / "models.json").string()) == 0);
  REQUIRE(run(cli + " train-eval --config " + cfg + " --out " + (root / "b.json").string()) == 0);
  CHECK(slurp(root / "a.json") == slurp(root / "b.json"));
  const auto report = nlohmann::json::parse(slurp(root / "a.json"));
  CHECK(report["eval_segments"] == 140);
  CHECK(report["accuracy"].get<double>() >= 0.97);
  CHECK(fs::exists(root / "models.json"));

  REQUIRE(run(cli + " train-eval --config " + cfg + " --format csv --out " + (root / "c.csv").string()) == 0);
  CHECK(slurp(root / "c.csv").rfind("true\\predicted", 0) == 0);

  fs::remove_all(root / "data" / "sitting");
  CHECK(run(cli + " train-eval --config " + cfg + " --out " + (root / "d.json").string()) != 0);
  CHECK(run(cli + " savings --config " + (root / "missing.json").string()) != 0);
  CHECK(run(cli + " inspect-features --input " + (root / "data" / "running" / "seg_00400.txt").string() +
            " --out " + (root / "f.json").string()) == 0);
  const auto feats = nlohmann::json::parse(slurp(root / "f.json"));
  CHECK(feats.size() == 9);
  CHECK(feats[0]["rate_hz"] == 5);
  CHECK(feats[0]["rows"] == 25);
}

TEST_CASE("shipped default config matches the built-in defaults") {
  const auto cfg = load_run_config(fs::path(HAR_SOURCE_DIR) / "configs" / "default.json");
  CHECK(to_json(cfg) == to_json(default_run_config()));
}

TEST_CASE("full-size layout: 7 activities x 480 segments") {
  const auto root = scratch("full_layout");
  auto cfg = small_config(480);
  write_dataset(root, synth(cfg.synth, cfg.cascade, cfg.window_s, 1));
  const auto stream = ingest(root, cfg.cascade, cfg.window_s);
  CHECK(stream.size() == 3360);
  fs::remove_all(root);
}
