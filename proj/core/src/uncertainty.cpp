#include "vkge/uncertainty.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "vkge/error.hpp"
#include "vkge/objective.hpp"
#include "vkge/scoring.hpp"

namespace vkge {

ScoreDistribution forward_sample_scores(const VariationalModel& model, const Triple& triple, std::size_t n_samples,
                                        Rng& rng) {
  if (n_samples < 2) throw UsageError("forward sampling needs at least 2 samples");
  const std::size_t d = model.width();
  const auto s_sym = Symbol::entity(triple.subject);
  const auto o_sym = Symbol::entity(triple.object);
  const auto r_sym = Symbol::relation(triple.relation);
  const auto s_slot = model.layout().locate(s_sym);
  const auto o_slot = model.layout().locate(o_sym);
  const auto r_slot = model.layout().locate(r_sym);
  const bool self_loop = triple.subject == triple.object;

  std::vector<double> eps(d), zs(d), zo(d), zr(d);
  auto draw = [&](TableSlot slot, std::vector<double>& out) {
    for (auto& e : eps) e = rng.normal();
    sample_embedding_into(model.tables()[slot.table], slot.row, eps, out);
  };

  ScoreDistribution dist;
  dist.samples.reserve(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    // Same symbol order as a minibatch draw: entities ascending, then the relation.
    if (self_loop) {
      draw(s_slot, zs);
      zo = zs;
    } else if (triple.subject < triple.object) {
      draw(s_slot, zs);
      draw(o_slot, zo);
    } else {
      draw(o_slot, zo);
      draw(s_slot, zs);
    }
    draw(r_slot, zr);
    dist.samples.push_back(score(model.spec().scorer, zs, zr, zo));
  }
  const double n = static_cast<double>(n_samples);
  dist.mean = std::accumulate(dist.samples.begin(), dist.samples.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : dist.samples) ss += (x - dist.mean) * (x - dist.mean);
  dist.variance = ss / (n - 1.0);
  return dist;
}

double confidence_magnitude(double score) {
  const double p = sigmoid(score);
  return std::max(p, 1.0 - p);
}

double confidence_sampled(const ScoreDistribution& distribution, double mean_score) {
  if (distribution.samples.empty()) throw UsageError("empty score distribution");
  const bool label = mean_score >= 0.0;
  std::size_t agree = 0;
  for (double x : distribution.samples) agree += (x >= 0.0) == label;
  return static_cast<double>(agree) / static_cast<double>(distribution.samples.size());
}

std::string_view to_string(ConfidenceEstimator e) { return e == ConfidenceEstimator::kSampled ? "sampled" : "magnitude"; }

ConfidenceEstimator parse_estimator(std::string_view name) {
  std::string n(name);
  std::transform(n.begin(), n.end(), n.begin(), [](unsigned char c) { return std::tolower(c); });
  if (n == "magnitude") return ConfidenceEstimator::kMagnitude;
  if (n == "sampled") return ConfidenceEstimator::kSampled;
  throw ConfigError("unknown confidence estimator '" + std::string(name) + "' (expected magnitude or sampled)");
}

ConfidenceReport precision_coverage(std::span<const Prediction> predictions, std::size_t n_points,
                                    ConfidenceEstimator estimator) {
  if (predictions.empty()) throw UsageError("precision_coverage: no predictions");
  if (n_points == 0) throw UsageError("precision_coverage: n_points must be >= 1");
  for (const auto& p : predictions) {
    if (!std::isfinite(p.confidence)) throw UsageError("precision_coverage: non-finite confidence");
  }
  std::vector<std::size_t> order(predictions.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return predictions[a].confidence > predictions[b].confidence;
  });
  // correct_prefix[m] = number correct among the m most confident.
  std::vector<std::size_t> correct_prefix(order.size() + 1, 0);
  for (std::size_t i = 0; i < order.size(); ++i) {
    correct_prefix[i + 1] = correct_prefix[i] + (predictions[order[i]].correct ? 1 : 0);
  }

  ConfidenceReport report;
  report.estimator = estimator;
  report.rows.reserve(n_points);
  const std::size_t n = predictions.size();
  for (std::size_t i = n_points; i >= 1; --i) {
    // ceil(i·n / n_points) in integers.
    const std::size_t keep = (i * n + n_points - 1) / n_points;
    CoverageRow row;
    row.coverage = static_cast<double>(i) / static_cast<double>(n_points);
    row.retained = keep;
    row.threshold = predictions[order[keep - 1]].confidence;
    row.precision = static_cast<double>(correct_prefix[keep]) / static_cast<double>(keep);
    report.rows.push_back(row);
  }
  return report;
}

std::vector<Prediction> link_predictions(const VariationalModel& model, const DatasetSplit& split,
                                         ConfidenceEstimator estimator, std::size_t n_samples, Rng& rng) {
  const auto& test = split.test();
  if (test.empty()) throw UsageError("link_predictions: empty test split");
  std::vector<std::pair<Triple, bool>> labeled;
  labeled.reserve(2 * test.size());
  for (const auto& t : test.triples()) labeled.emplace_back(t, true);
  for (const auto& t : test.triples()) {
    labeled.emplace_back(negative_sample(split.all_true().truth_index(), split.num_entities(), t, rng), false);
  }

  std::vector<Prediction> out;
  out.reserve(labeled.size());
  const auto scorer = model.spec().scorer;
  for (const auto& [t, truth] : labeled) {
    const double mean_score = score(scorer, model.mean(Symbol::entity(t.subject)), model.mean(Symbol::relation(t.relation)),
                                    model.mean(Symbol::entity(t.object)));
    const bool predicted = mean_score >= 0.0;
    double confidence = 0.0;
    if (estimator == ConfidenceEstimator::kMagnitude) {
      confidence = confidence_magnitude(mean_score);
    } else {
      confidence = confidence_sampled(forward_sample_scores(model, t, n_samples, rng), mean_score);
    }
    out.push_back({confidence, predicted == truth});
  }
  return out;
}

std::vector<FrequencyVarianceRow> variance_frequency_table(const VariationalModel& model, const DatasetSplit& split) {
  const std::size_t ne = model.num_entities(), nr = model.num_relations();
  if (ne != split.num_entities() || nr != split.num_relations()) {
    throw UsageError("model and dataset vocabulary sizes differ");
  }
  std::vector<std::size_t> ent_freq(ne, 0), rel_freq(nr, 0);
  for (const auto& t : split.train().triples()) {
    ++ent_freq[t.subject];
    ++ent_freq[t.object];
    ++rel_freq[t.relation];
  }
  auto row = [&](Symbol sym, std::size_t freq) {
    const auto lv = model.log_variance(sym);
    double acc = 0.0;
    for (double v : lv) acc += std::exp(v);
    return FrequencyVarianceRow{sym.kind, sym.id, freq, std::log1p(static_cast<double>(freq)),
                                acc / static_cast<double>(lv.size())};
  };
  std::vector<FrequencyVarianceRow> rows;
  rows.reserve(ne + nr);
  for (std::uint32_t e = 0; e < ne; ++e) rows.push_back(row(Symbol::entity(e), ent_freq[e]));
  for (std::uint32_t r = 0; r < nr; ++r) rows.push_back(row(Symbol::relation(r), rel_freq[r]));
  return rows;
}

namespace {

std::vector<double> mid_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman_correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DimensionError("spearman_correlation: length mismatch");
  if (x.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  const auto rx = mid_ranks(x), ry = mid_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return sxy / std::sqrt(sxx * syy);
}

FrequencyVarianceSummary summarize_frequency_variance(std::span<const FrequencyVarianceRow> rows) {
  std::vector<double> ef, ev, rf, rv;
  for (const auto& r : rows) {
    auto& f = r.kind == SymbolKind::kEntity ? ef : rf;
    auto& v = r.kind == SymbolKind::kEntity ? ev : rv;
    f.push_back(r.log1p_frequency);
    v.push_back(r.mean_variance);
  }
  return {spearman_correlation(ef, ev), spearman_correlation(rf, rv)};
}

}  // namespace vkge
