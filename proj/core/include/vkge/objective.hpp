#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "vkge/kg.hpp"
#include "vkge/rng.hpp"
#include "vkge/variational.hpp"

namespace vkge {

inline constexpr int kMaxCorruptionAttempts = 100;

// Replaces the object (probability 1/2) or the subject with a uniform entity,
// redrawing while the result is in `exclude`. After kMaxCorruptionAttempts
// failed draws the last one is returned as is.
Triple negative_sample(const TruthIndex& exclude, std::size_t num_entities, const Triple& positive, Rng& rng);

// Corrupts against the training truth index.
Triple negative_sample(const DatasetSplit& split, const Triple& positive, Rng& rng);

enum class Label : std::uint8_t { kPositive, kNegative };

// log σ(x), stable for large |x|.
double log_sigmoid(double x);
double sigmoid(double x);

// log σ(score) for positives, log σ(−score) for negatives.
double triple_log_likelihood(double score, Label label);
// d/dscore of triple_log_likelihood.
double triple_log_likelihood_grad(double score, Label label);

struct LabeledTriple {
  Triple triple;
  Label label = Label::kPositive;
  // Inverse inclusion probability.
  double weight = 1.0;
};

struct ElboBreakdown {
  double ll_positive = 0.0;
  double ll_negative = 0.0;
  double kl_total = 0.0;
  double elbo = 0.0;
};

// The randomness consumed by one minibatch: its labeled terms and one noise
// vector per touched symbol.
struct MinibatchDraw {
  std::vector<LabeledTriple> terms;
  std::map<Symbol, NoiseDraw> noise;
};

// Pairs every positive with one corruption and draws ε for every symbol the
// terms touch (entities ascending, then relations ascending).
MinibatchDraw draw_minibatch(std::span<const Triple> batch, const DatasetSplit& split, std::size_t width, Rng& rng);

// Deterministic ELBO estimate for a fixed draw:
//   likelihood_weight · Σ_terms weight · log p(label | z) − kl_scale · KL(q || N(0, I)).
// When gradients is non-null it receives ∂ELBO/∂(μ, log σ²) (overwritten).
ElboBreakdown evaluate_elbo(const VariationalModel& model, const MinibatchDraw& draw, double kl_scale,
                            ModelGradients* gradients, double likelihood_weight = 1.0);

struct ObjectiveOptions {
  // Scales every likelihood term; 0 leaves only the KL pressure.
  double likelihood_weight = 1.0;
};

struct MinibatchResult {
  ElboBreakdown breakdown;
  // Ascent direction ∂ELBO/∂θ, dense over all rows (the KL share touches
  // every row; likelihood terms only the rows in `touched`).
  ModelGradients gradients;
  std::vector<Symbol> touched;
  MinibatchDraw draw;
};

// Bernoulli-sampled ELBO over one minibatch of training positives. Positives
// and negatives both carry weight 1; the KL is scaled by |batch| / |train| so
// one epoch accumulates exactly one KL. Throws UsageError on an empty batch.
MinibatchResult elbo_minibatch(const VariationalModel& model, std::span<const Triple> batch,
                               const DatasetSplit& split, Rng& rng, const ObjectiveOptions& options = {});

enum class NegativeWeighting : std::uint8_t {
  // Every triple outside the training truth index counts once (the full
  // LCWA sum).
  kAllUnobserved,
  // Each triple weighted by its expected number of draws when negative_sample
  // is applied once to every training positive; the expectation of the
  // minibatch estimator over a full-train batch.
  kCorruptionMatched,
};

inline constexpr std::size_t kMaxExactTriples = 1'000'000;

// Enumerates all N_e·N_r·N_e triples, estimating each expected log-likelihood
// with mc_samples joint noise draws, minus the full KL. Throws CapacityError
// beyond kMaxExactTriples and UsageError when mc_samples == 0.
ElboBreakdown exact_elbo(const VariationalModel& model, const DatasetSplit& split, std::size_t mc_samples, Rng& rng,
                         NegativeWeighting weighting = NegativeWeighting::kAllUnobserved);

// Exact probability that negative_sample(exclude, N_e, positive) returns each
// candidate, as {triple, probability} pairs with non-zero mass.
std::vector<std::pair<Triple, double>> corruption_distribution(const TruthIndex& exclude, std::size_t num_entities,
                                                               const Triple& positive);

}  // namespace vkge
