#include "vkge/training.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vkge/error.hpp"

namespace vkge {
namespace {

enum Stream : std::uint64_t { kInitStream = 1, kShuffleStream = 2, kSampleStream = 3 };

void negate(ModelGradients& g) {
  for (auto& t : g.tables) {
    for (auto& x : t.d_means) x = -x;
    for (auto& x : t.d_log_variances) x = -x;
  }
}

}  // namespace

void TrainConfig::validate() const {
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  if (validate_every < 1) throw ConfigError("validate_every must be >= 1");
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (model.rank < 1) throw ConfigError("embedding_dim must be >= 1");
  if (!(adam.learning_rate > 0.0) || !std::isfinite(adam.learning_rate)) {
    throw ConfigError("learning_rate must be a positive finite number");
  }
  if (!(adam.beta1 >= 0.0 && adam.beta1 < 1.0) || !(adam.beta2 >= 0.0 && adam.beta2 < 1.0)) {
    throw ConfigError("adam betas must lie in [0, 1)");
  }
  if (!(adam.epsilon > 0.0)) throw ConfigError("adam_epsilon must be positive");
  if (!(likelihood_weight >= 0.0) || !std::isfinite(likelihood_weight)) {
    throw ConfigError("likelihood_weight must be a non-negative finite number");
  }
}

VariationalModel initial_model(const TrainConfig& config, std::size_t num_entities, std::size_t num_relations) {
  Rng rng = Rng::stream(config.seed, kInitStream);
  return VariationalModel::initialize(config.model, num_entities, num_relations, rng);
}

TrainResult train(const DatasetSplit& split, const TrainConfig& config, const TrainOptions& options) {
  config.validate();
  if (split.train().empty()) throw UsageError("cannot train on an empty training split");

  VariationalModel model = initial_model(config, split.num_entities(), split.num_relations());
  TrainState state = TrainState::for_model(model);
  Rng shuffle_rng = Rng::stream(config.seed, kShuffleStream);
  Rng sample_rng = Rng::stream(config.seed, kSampleStream);
  const ObjectiveOptions objective{config.likelihood_weight};

  auto abort = [&](const std::string& why) -> NumericError {
    if (options.abort_checkpoint) {
      save_checkpoint(Checkpoint::capture(model, config.seed, state.step, &state), *options.abort_checkpoint);
    }
    return NumericError(why);
  };

  std::vector<Triple> order(split.train().triples().begin(), split.train().triples().end());
  const bool has_validation = !split.valid().empty();

  TrainResult result;
  std::optional<VariationalModel> best;
  double best_hits = -1.0;

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[shuffle_rng.uniform_below(i)]);

    EpochRecord record;
    record.epoch = epoch;
    for (std::size_t begin = 0; begin < order.size(); begin += config.batch_size) {
      const std::size_t end = std::min(order.size(), begin + config.batch_size);
      auto mb = elbo_minibatch(model, std::span<const Triple>(order).subspan(begin, end - begin), split, sample_rng,
                               objective);
      if (!std::isfinite(mb.breakdown.elbo)) {
        throw abort("non-finite ELBO at epoch " + std::to_string(epoch) + ", step " + std::to_string(state.step + 1));
      }
      negate(mb.gradients);
      try {
        adam_step(model, mb.gradients, state, config.adam);
      } catch (const NumericError& e) {
        throw abort(std::string(e.what()) + " at epoch " + std::to_string(epoch));
      }
      record.elbo.ll_positive += mb.breakdown.ll_positive;
      record.elbo.ll_negative += mb.breakdown.ll_negative;
      record.elbo.kl_total += mb.breakdown.kl_total;
      record.elbo.elbo += mb.breakdown.elbo;
      ++record.batches;
    }
    record.step = state.step;

    const bool due = epoch % config.validate_every == 0 || epoch == config.epochs;
    if (has_validation && due) {
      VariationalModel snapshot = model.quantized();
      RankingReport report = evaluate(snapshot, split, EvalSplit::kValid);
      ValidationRecord v{report.filtered, report.raw.mean_rank, false};
      if (report.filtered.hits_at_10 > best_hits) {
        best_hits = report.filtered.hits_at_10;
        best = std::move(snapshot);
        result.best_validation = std::move(report);
        result.best_epoch = epoch;
        v.improved = true;
      }
      record.validation = v;
    }
    if (options.on_epoch) options.on_epoch(record);
    result.log.push_back(std::move(record));
  }

  if (best) {
    std::uint64_t best_step = 0;
    for (const auto& r : result.log) {
      if (r.epoch == result.best_epoch) best_step = r.step;
    }
    result.checkpoint = Checkpoint::capture(*best, config.seed, best_step);
  } else {
    result.best_epoch = config.epochs;
    result.checkpoint = Checkpoint::capture(model, config.seed, state.step);
  }
  return result;
}

}  // namespace vkge
