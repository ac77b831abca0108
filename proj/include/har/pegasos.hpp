#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <span>
#include <utility>
#include <vector>

namespace har {

enum class BinaryLabel : int { Negative = -1, Positive = 1 };

inline double sign_of(BinaryLabel y) { return static_cast<double>(static_cast<int>(y)); }
BinaryLabel binary_label_from_int(int y);

struct PegasosConfig {
  double lambda = 0.01;
  std::size_t k = 10;  // window capacity; also the memory bound in segments
  bool use_projection = false;
  std::size_t dim = 1;

  void validate() const;
};

struct LabeledPoint {
  std::vector<double> x;
  BinaryLabel y = BinaryLabel::Positive;
};

struct Prediction {
  BinaryLabel label;
  double margin;
};

/// Linear SVM trained by Pegasos subgradient steps over the k most recent
/// observations. No bias term: callers append a constant feature if needed.
///
/// observe() only touches the window; step() only touches w and t. A model is
/// single-writer; predict() is safe to call concurrently.
class PegasosModel {
 public:
  explicit PegasosModel(PegasosConfig config);

  /// Restores a persisted model. Window entries beyond k are rejected.
  PegasosModel(PegasosConfig config, std::vector<double> w, std::uint64_t t,
               std::deque<LabeledPoint> window);

  /// FIFO insert; evicts the oldest entry when the window is full.
  void observe(std::span<const double> x, BinaryLabel y);

  /// One subgradient step on the current window with eta = 1/(lambda*t).
  void step();

  Prediction predict(std::span<const double> x) const;

  /// lambda/2 ||w||^2 + mean hinge loss over data.
  double objective(std::span<const LabeledPoint> data) const;

  const PegasosConfig& config() const { return config_; }
  const std::vector<double>& weights() const { return w_; }
  std::uint64_t iterations() const { return t_; }
  double last_step_size() const { return last_eta_; }
  const std::deque<LabeledPoint>& window() const { return window_; }

 private:
  void check_dim(std::span<const double> x) const;

  PegasosConfig config_;
  std::vector<double> w_;
  std::uint64_t t_ = 0;
  double last_eta_ = 0.0;
  std::deque<LabeledPoint> window_;
};

}  // namespace har
