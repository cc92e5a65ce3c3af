#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "vkge/kg.hpp"
#include "vkge/rng.hpp"
#include "vkge/variational.hpp"

namespace vkge {

struct ScoreDistribution {
  std::vector<double> samples;
  double mean = 0.0;
  // Unbiased (n − 1) sample variance.
  double variance = 0.0;
};

// Scores `triple` under n_samples independent reparameterised draws (one ε per
// distinct symbol per draw). Throws UsageError when n_samples < 2.
ScoreDistribution forward_sample_scores(const VariationalModel& model, const Triple& triple, std::size_t n_samples,
                                        Rng& rng);

// max(σ(x), 1 − σ(x)): the probability the model assigns to its own label.
double confidence_magnitude(double score);

// Fraction of sampled scores whose sign-label agrees with the label of
// mean_score (score >= 0 reads as "true").
double confidence_sampled(const ScoreDistribution& distribution, double mean_score);

enum class ConfidenceEstimator : std::uint8_t { kMagnitude, kSampled };
std::string_view to_string(ConfidenceEstimator e);
ConfidenceEstimator parse_estimator(std::string_view name);

struct Prediction {
  double confidence = 0.0;
  bool correct = false;
};

struct CoverageRow {
  double coverage = 0.0;
  // Lowest confidence still retained.
  double threshold = 0.0;
  double precision = 0.0;
  std::size_t retained = 0;
};

struct ConfidenceReport {
  ConfidenceEstimator estimator = ConfidenceEstimator::kMagnitude;
  // Descending coverage: n_points/n_points, ..., 1/n_points.
  std::vector<CoverageRow> rows;
};

// For every coverage c = i / n_points keeps the ceil(c·n) most confident
// predictions (ties in input order) and records their precision. Throws
// UsageError on empty input, a zero grid or non-finite confidences.
ConfidenceReport precision_coverage(std::span<const Prediction> predictions, std::size_t n_points = 1000,
                                    ConfidenceEstimator estimator = ConfidenceEstimator::kMagnitude);

// Test triples labeled true plus one corruption each (against train ∪ valid ∪
// test) labeled false, scored with the chosen estimator. The predicted label
// is the sign of the posterior-mean score.
std::vector<Prediction> link_predictions(const VariationalModel& model, const DatasetSplit& split,
                                         ConfidenceEstimator estimator, std::size_t n_samples, Rng& rng);

struct FrequencyVarianceRow {
  SymbolKind kind = SymbolKind::kEntity;
  std::uint32_t id = 0;
  // Occurrences in train: subject and object positions for entities.
  std::size_t frequency = 0;
  double log1p_frequency = 0.0;
  // Mean of σ² over the embedding dimensions.
  double mean_variance = 0.0;
};

// Entities first, then relations, each in id order.
std::vector<FrequencyVarianceRow> variance_frequency_table(const VariationalModel& model, const DatasetSplit& split);

// Pearson correlation of mid-ranks. NaN when either side is constant.
double spearman_correlation(std::span<const double> x, std::span<const double> y);

struct FrequencyVarianceSummary {
  double entity_spearman = 0.0;
  double relation_spearman = 0.0;
};

FrequencyVarianceSummary summarize_frequency_variance(std::span<const FrequencyVarianceRow> rows);

}  // namespace vkge
