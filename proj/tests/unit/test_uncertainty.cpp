#include <gtest/gtest.h>

#include <cmath>
#include <iostream>

#include "oracles.hpp"
#include "vkge/error.hpp"
#include "vkge/scoring.hpp"
#include "vkge/synthetic.hpp"
#include "vkge/training.hpp"
#include "vkge/uncertainty.hpp"

namespace vkge {
namespace {

using testing::Engine;

TEST(ForwardSample, NearZeroVariance) {
  Engine gen(1);
  const auto model = testing::random_model(gen, {Scorer::kComplEx, Grouping::kLIM, 4}, 3, 1, 1.0, -20.0, -20.0);
  Rng rng(1);
  const auto d = forward_sample_scores(model, {0, 0, 2}, 500, rng);
  EXPECT_LT(d.variance, 1e-6);
  EXPECT_EQ(d.samples.size(), 500u);
}

TEST(ForwardSample, SeedDeterminesSamples) {
  Engine gen(2);
  const auto model = testing::random_model(gen, {Scorer::kDistMult, Grouping::kLFM, 4}, 3, 1, 1.0, -2.0, 0.0);
  Rng a(7), b(7);
  EXPECT_EQ(forward_sample_scores(model, {1, 0, 2}, 50, a).samples, forward_sample_scores(model, {1, 0, 2}, 50, b).samples);
  Rng c(1);
  EXPECT_THROW(forward_sample_scores(model, {1, 0, 2}, 1, c), UsageError);
}

TEST(ForwardSample, MeanAndVarianceConsistentWithSamples) {
  Engine gen(3);
  const auto model = testing::random_model(gen, {Scorer::kComplEx, Grouping::kLIM, 3}, 4, 2, 1.0, -2.0, 0.0);
  Rng rng(3);
  const auto d = forward_sample_scores(model, {3, 1, 0}, 200, rng);
  double m = 0.0;
  for (double x : d.samples) m += x;
  m /= 200.0;
  double v = 0.0;
  for (double x : d.samples) v += (x - m) * (x - m);
  v /= 199.0;
  EXPECT_NEAR(d.mean, m, 1e-9);
  EXPECT_NEAR(d.variance, v, 1e-9);
}

TEST(ForwardSample, LinearFunctionalVariance) {
  Engine gen(4);
  const std::size_t k = 5;
  auto model = testing::random_model(gen, {Scorer::kDistMult, Grouping::kLIM, k}, 2, 1, 1.0, kMinLogVariance,
                                     kMinLogVariance);
  auto lv = model.log_variance(Symbol::entity(0));
  for (auto& x : lv) x = std::uniform_real_distribution<double>(-2.0, 0.5)(gen);
  const auto r = model.mean(Symbol::relation(0));
  const auto o = model.mean(Symbol::entity(1));
  double expected = 0.0;
  for (std::size_t i = 0; i < k; ++i) expected += (r[i] * o[i]) * (r[i] * o[i]) * std::exp(lv[i]);
  Rng rng(4);
  const auto d = forward_sample_scores(model, {0, 0, 1}, 10000, rng);
  EXPECT_NEAR(d.variance / expected, 1.0, 0.10);
}

TEST(ForwardSample, MeanConvergesToMeanScore) {
  Engine gen(5);
  for (const auto sc : {Scorer::kDistMult, Scorer::kComplEx}) {
    const auto model = testing::random_model(gen, {sc, Grouping::kLIM, 4}, 3, 1, 1.0, -2.0, -0.5);
    Rng rng(5);
    const Triple t{0, 0, 2};
    const auto d = forward_sample_scores(model, t, 10000, rng);
    const double mean_score =
        testing::score_oracle(sc, model.mean(Symbol::entity(0)), model.mean(Symbol::relation(0)),
                              model.mean(Symbol::entity(2)));
    EXPECT_NEAR(d.mean, mean_score, 4.0 * std::sqrt(d.variance / 10000.0)) << to_string(sc);
  }
}

TEST(ConfidenceMagnitude, Examples) {
  EXPECT_DOUBLE_EQ(confidence_magnitude(0.0), 0.5);
  EXPECT_NEAR(confidence_magnitude(10.0), 0.9999546021312976, 1e-12);
  EXPECT_NEAR(confidence_magnitude(-10.0), 0.9999546021312976, 1e-12);
  EXPECT_NEAR(confidence_magnitude(1.5), 0.8175744761936437, 1e-12);
}

TEST(ConfidenceMagnitude, NegationInvariant) {
  Engine gen(6);
  for (int i = 0; i < 500; ++i) {
    const double x = std::normal_distribution<double>(0.0, 8.0)(gen);
    const double c = confidence_magnitude(x);
    EXPECT_NEAR(c, confidence_magnitude(-x), 1e-15);
    EXPECT_GE(c, 0.5);
    EXPECT_LE(c, 1.0);
  }
}

TEST(ConfidenceSampled, FractionAgreeingWithMeanLabel) {
  ScoreDistribution d;
  d.samples = {1.0, -0.5, 2.0, 0.0};
  EXPECT_DOUBLE_EQ(confidence_sampled(d, 0.3), 0.75);
  EXPECT_DOUBLE_EQ(confidence_sampled(d, -0.3), 0.25);
  EXPECT_THROW(confidence_sampled(ScoreDistribution{}, 0.0), UsageError);
}

TEST(Estimator, Names) {
  EXPECT_EQ(parse_estimator("magnitude"), ConfidenceEstimator::kMagnitude);
  EXPECT_EQ(parse_estimator("sampled"), ConfidenceEstimator::kSampled);
  EXPECT_EQ(to_string(ConfidenceEstimator::kSampled), "sampled");
  EXPECT_THROW(parse_estimator("oracle"), ConfigError);
}

TEST(PrecisionCoverage, TwoItemSweep) {
  const std::vector<Prediction> preds{{0.9, true}, {0.5, false}};
  const auto rep = precision_coverage(preds, 2);
  ASSERT_EQ(rep.rows.size(), 2u);
  EXPECT_EQ(rep.rows[0].coverage, 1.0);
  EXPECT_EQ(rep.rows[0].precision, 0.5);
  EXPECT_EQ(rep.rows[1].coverage, 0.5);
  EXPECT_EQ(rep.rows[1].precision, 1.0);
  EXPECT_EQ(rep.rows[1].threshold, 0.9);
  EXPECT_EQ(precision_coverage(preds).rows.size(), 1000u);
}

TEST(PrecisionCoverage, AllCorrect) {
  Engine gen(7);
  std::vector<Prediction> preds;
  for (int i = 0; i < 37; ++i) preds.push_back({std::uniform_real_distribution<double>(0.5, 1.0)(gen), true});
  for (const auto& row : precision_coverage(preds, 1000).rows) EXPECT_EQ(row.precision, 1.0);
}

TEST(PrecisionCoverage, Errors) {
  EXPECT_THROW(precision_coverage({}, 10), UsageError);
  const std::vector<Prediction> preds{{0.9, true}};
  EXPECT_THROW(precision_coverage(preds, 0), UsageError);
  const std::vector<Prediction> bad{{std::nan(""), true}};
  EXPECT_THROW(precision_coverage(bad, 10), UsageError);
}

TEST(PrecisionCoverage, MatchesSortOracle) {
  Engine gen(8);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 100)(gen);
    std::vector<Prediction> preds(n);
    for (auto& p : preds) {
      // Coarse confidences on some sets to exercise the stable tie order.
      const double c = std::uniform_real_distribution<double>(0.5, 1.0)(gen);
      p = {rep % 2 ? std::round(c * 10.0) / 10.0 : c, std::bernoulli_distribution(0.7)(gen)};
    }
    const std::size_t points = rep % 3 == 0 ? 1000 : 37;
    const auto got = precision_coverage(preds, points).rows;
    const auto want = testing::precision_coverage_oracle(preds, points);
    ASSERT_EQ(got.size(), want.size());
    std::size_t correct = 0;
    for (const auto& p : preds) correct += p.correct;
    EXPECT_EQ(got.front().precision, static_cast<double>(correct) / static_cast<double>(n));
    for (std::size_t i = 0; i < got.size(); ++i) {
      ASSERT_EQ(got[i].retained, want[i].retained) << rep << " " << i;
      ASSERT_EQ(got[i].precision, want[i].precision);
      ASSERT_EQ(got[i].threshold, want[i].threshold);
      ASSERT_EQ(got[i].coverage, want[i].coverage);
      if (i > 0) {
        EXPECT_LT(got[i].coverage, got[i - 1].coverage);
        EXPECT_LE(got[i].retained, got[i - 1].retained);
        EXPECT_GE(got[i].threshold, got[i - 1].threshold);
      }
    }
  }
}

TEST(LinkPredictions, OnePositiveAndOneNegativePerTestTriple) {
  Engine gen(9);
  const auto split = testing::random_split(gen, 10, 2, 20, 0, 15);
  const auto model = testing::random_model(gen, {Scorer::kDistMult, Grouping::kLIM, 3}, 10, 2, 1.0, -3.0, -1.0);
  for (const auto est : {ConfidenceEstimator::kMagnitude, ConfidenceEstimator::kSampled}) {
    Rng a(2), b(2);
    const auto p = link_predictions(model, split, est, 50, a);
    const auto q = link_predictions(model, split, est, 50, b);
    ASSERT_EQ(p.size(), 30u);
    for (std::size_t i = 0; i < p.size(); ++i) {
      EXPECT_EQ(p[i].confidence, q[i].confidence);
      EXPECT_EQ(p[i].correct, q[i].correct);
      EXPECT_GE(p[i].confidence, est == ConfidenceEstimator::kMagnitude ? 0.5 : 0.0);
      EXPECT_LE(p[i].confidence, 1.0);
    }
  }
}

TEST(VarianceFrequency, UntrainedTableAndAbsentSymbol) {
  const DatasetSplit split(testing::numbered_vocabulary(4, 2), {{0, 0, 1}, {1, 0, 1}}, {}, {{2, 1, 0}});
  const VariationalModel model({Scorer::kComplEx, Grouping::kLIM, 3}, 4, 2);
  const auto rows = variance_frequency_table(model, split);
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[0].frequency, 1u);
  EXPECT_EQ(rows[1].frequency, 3u);
  EXPECT_EQ(rows[2].frequency, 0u);
  EXPECT_EQ(rows[2].log1p_frequency, 0.0);
  EXPECT_EQ(rows[3].frequency, 0u);
  EXPECT_EQ(rows[4].kind, SymbolKind::kRelation);
  EXPECT_EQ(rows[4].frequency, 2u);
  EXPECT_EQ(rows[5].frequency, 0u);
  EXPECT_NEAR(rows[1].log1p_frequency, std::log(4.0), 1e-15);
  for (const auto& r : rows) EXPECT_NEAR(r.mean_variance, 0.0024787521766663585, 1e-15);
  EXPECT_THROW(variance_frequency_table(VariationalModel({Scorer::kComplEx, Grouping::kLIM, 3}, 5, 2), split),
               UsageError);
}

TEST(Spearman, ReferenceValues) {
  const std::vector<double> x{1, 2, 3, 4, 5};
  EXPECT_NEAR(spearman_correlation(x, std::vector<double>{5, 6, 7, 8, 7}), 0.8207826816681233, 1e-12);
  EXPECT_NEAR(spearman_correlation(x, std::vector<double>{1, 4, 9, 16, 25}), 1.0, 1e-12);
  EXPECT_NEAR(spearman_correlation(x, std::vector<double>{9, 7, 5, 3, 1}), -1.0, 1e-12);
  EXPECT_TRUE(std::isnan(spearman_correlation(x, std::vector<double>(5, 2.0))));
  EXPECT_THROW(spearman_correlation(x, std::vector<double>{1.0}), DimensionError);
}

TEST(VarianceFrequency, TrainedSpearmanIsFinite) {
  const auto kg = make_synthetic_kg({});
  const auto split = split_dataset(kg, {0.8, 0.1, 0.1}, 7);
  TrainConfig c;
  c.epochs = 200;
  c.validate_every = 200;
  c.adam.learning_rate = 3e-3;
  c.model = {Scorer::kDistMult, Grouping::kLIM, 20};
  c.seed = 3;
  const auto r = train(split, c);
  const auto rows = variance_frequency_table(r.checkpoint.model, split);
  for (const auto& row : rows) EXPECT_GT(row.mean_variance, 0.0);
  const auto s = summarize_frequency_variance(rows);
  EXPECT_TRUE(std::isfinite(s.entity_spearman));
  EXPECT_TRUE(std::isfinite(s.relation_spearman));
  std::cout << "entity spearman " << s.entity_spearman << " (sign " << (s.entity_spearman > 0 ? "+" : "-")
            << "), relation spearman " << s.relation_spearman << '\n';
}

}  // namespace
}  // namespace vkge
