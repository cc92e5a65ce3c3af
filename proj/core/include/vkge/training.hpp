#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <vector>

#include "vkge/checkpoint.hpp"
#include "vkge/evaluation.hpp"
#include "vkge/kg.hpp"
#include "vkge/model_spec.hpp"
#include "vkge/objective.hpp"
#include "vkge/optimizer.hpp"

namespace vkge {

struct TrainConfig {
  std::size_t epochs = 500;
  std::size_t validate_every = 50;
  std::size_t batch_size = 128;
  AdamConfig adam;
  ModelSpec model;
  std::uint64_t seed = 0;
  // 1 for the ELBO; 0 trains against the prior alone.
  double likelihood_weight = 1.0;

  // Throws ConfigError.
  void validate() const;
};

struct ValidationRecord {
  RankingMetrics filtered;
  double raw_mean_rank = 0.0;
  bool improved = false;
};

struct EpochRecord {
  std::size_t epoch = 0;
  std::uint64_t step = 0;
  std::size_t batches = 0;
  // Summed over the epoch's minibatches.
  ElboBreakdown elbo;
  std::optional<ValidationRecord> validation;
};

struct TrainResult {
  // Best snapshot by filtered valid Hits@10, or the final model when there is
  // no validation split.
  Checkpoint checkpoint;
  std::vector<EpochRecord> log;
  std::optional<RankingReport> best_validation;
  std::size_t best_epoch = 0;
};

struct TrainOptions {
  // Written with the optimiser state when training aborts on a non-finite
  // loss or gradient.
  std::optional<std::filesystem::path> abort_checkpoint;
  std::function<void(const EpochRecord&)> on_epoch;
};

// The model train() starts from for this config.
VariationalModel initial_model(const TrainConfig& config, std::size_t num_entities, std::size_t num_relations);

// Maximises the minibatch ELBO with Adam, shuffling the training triples each
// epoch and validating every validate_every epochs (and after the last one).
// Throws NumericError on a non-finite loss or gradient.
TrainResult train(const DatasetSplit& split, const TrainConfig& config, const TrainOptions& options = {});

}  // namespace vkge
