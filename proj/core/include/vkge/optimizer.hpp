#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "vkge/variational.hpp"

namespace vkge {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamMoments {
  std::vector<double> first;
  std::vector<double> second;

  AdamMoments() = default;
  explicit AdamMoments(std::size_t n) : first(n, 0.0), second(n, 0.0) {}

  friend bool operator==(const AdamMoments&, const AdamMoments&) = default;
};

struct ClampRange {
  double lo;
  double hi;
};

// One bias-corrected Adam update of params against the descent gradient.
// step is the 1-based count of updates including this one. Throws
// NumericError naming the first non-finite gradient index.
void adam_update(std::span<double> params, std::span<const double> grads, AdamMoments& moments, std::uint64_t step,
                 const AdamConfig& config, std::optional<ClampRange> clamp = std::nullopt);

// Optimiser state for a whole model: one moment pair per parameter block,
// ordered table 0 means, table 0 log-variances, table 1 means, ...
struct TrainState {
  std::uint64_t step = 0;
  std::vector<AdamMoments> moments;

  static TrainState for_model(const VariationalModel& model);

  friend bool operator==(const TrainState&, const TrainState&) = default;
};

// Descends `descent` (the loss gradient, i.e. −∂ELBO) with Adam; log-variances
// are clamped to [kMinLogVariance, kMaxLogVariance]. A non-finite gradient
// aborts with NumericError naming the symbol row before anything is written.
void adam_step(VariationalModel& model, const ModelGradients& descent, TrainState& state, const AdamConfig& config);

}  // namespace vkge
