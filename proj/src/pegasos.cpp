#include "har/pegasos.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "har/errors.hpp"

namespace har {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

}  // namespace

BinaryLabel binary_label_from_int(int y) {
  if (y == 1) return BinaryLabel::Positive;
  if (y == -1) return BinaryLabel::Negative;
  throw DomainError("binary label must be +1 or -1, got " + std::to_string(y));
}

void PegasosConfig::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("lambda must be positive");
  if (k < 1) throw DomainError("window size k must be at least 1");
  if (dim < 1) throw DomainError("model dimension must be at least 1");
}

PegasosModel::PegasosModel(PegasosConfig config) : config_(config), w_(config.dim, 0.0) {
  config_.validate();
}

PegasosModel::PegasosModel(PegasosConfig config, std::vector<double> w, std::uint64_t t,
                           std::deque<LabeledPoint> window)
    : config_(config), w_(std::move(w)), t_(t), window_(std::move(window)) {
  config_.validate();
  if (w_.size() != config_.dim) throw DomainError("weight vector length does not match dim");
  if (window_.size() > config_.k) throw DomainError("stored window exceeds k");
  for (const auto& p : window_) check_dim(p.x);
  if (t_ > 0) last_eta_ = 1.0 / (config_.lambda * static_cast<double>(t_));
}

void PegasosModel::check_dim(std::span<const double> x) const {
  if (x.size() != config_.dim) {
    throw DomainError("expected " + std::to_string(config_.dim) + "-dimensional input, got " +
                      std::to_string(x.size()));
  }
}

void PegasosModel::observe(std::span<const double> x, BinaryLabel y) {
  check_dim(x);
  if (y != BinaryLabel::Positive && y != BinaryLabel::Negative)
    throw DomainError("binary label must be +1 or -1");
  if (window_.size() == config_.k) window_.pop_front();
  window_.push_back({std::vector<double>(x.begin(), x.end()), y});
}

void PegasosModel::step() {
  if (window_.empty()) throw StateError("pegasos step on an empty window");

  ++t_;
  const double lambda = config_.lambda;
  const double eta = 1.0 / (lambda * static_cast<double>(t_));
  last_eta_ = eta;

  // Subgradient uses w_t for every indicator, so collect the hinge term first.
  std::vector<double> violators(w_.size(), 0.0);
  for (const auto& p : window_) {
    const double y = sign_of(p.y);
    if (y * dot(w_, p.x) < 1.0) {
      for (std::size_t i = 0; i < w_.size(); ++i) violators[i] += y * p.x[i];
    }
  }
  const double inv_n = 1.0 / static_cast<double>(window_.size());
  for (std::size_t i = 0; i < w_.size(); ++i) {
    const double grad = lambda * w_[i] - inv_n * violators[i];
    w_[i] -= eta * grad;
  }

  if (config_.use_projection) {
    const double norm = std::sqrt(dot(w_, w_));
    const double radius = 1.0 / std::sqrt(lambda);
    if (norm > radius) {
      const double scale = radius / norm;
      for (double& v : w_) v *= scale;
    }
  }
}

Prediction PegasosModel::predict(std::span<const double> x) const {
  check_dim(x);
  const double m = dot(w_, x);
  return {m >= 0.0 ? BinaryLabel::Positive : BinaryLabel::Negative, m};
}

double PegasosModel::objective(std::span<const LabeledPoint> data) const {
  if (data.empty()) throw DomainError("objective over empty data");
  double hinge = 0.0;
  for (const auto& p : data) {
    check_dim(p.x);
    hinge += std::max(0.0, 1.0 - sign_of(p.y) * dot(w_, p.x));
  }
  return 0.5 * config_.lambda * dot(w_, w_) + hinge / static_cast<double>(data.size());
}

}  // namespace har
