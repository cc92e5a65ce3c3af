#include "vkge/objective.hpp"

#include <cmath>
#include <string>

#include "vkge/error.hpp"
#include "vkge/scoring.hpp"

namespace vkge {

Triple negative_sample(const TruthIndex& exclude, std::size_t num_entities, const Triple& positive, Rng& rng) {
  if (num_entities == 0) throw UsageError("cannot corrupt a triple without entities");
  const bool corrupt_object = rng.bernoulli_half();
  Triple candidate = positive;
  for (int attempt = 0; attempt < kMaxCorruptionAttempts; ++attempt) {
    const auto e = static_cast<EntityId>(rng.uniform_below(num_entities));
    candidate = positive;
    (corrupt_object ? candidate.object : candidate.subject) = e;
    if (!exclude.contains(candidate)) break;
  }
  return candidate;
}

Triple negative_sample(const DatasetSplit& split, const Triple& positive, Rng& rng) {
  return negative_sample(split.train().truth_index(), split.num_entities(), positive, rng);
}

double log_sigmoid(double x) {
  if (x >= 0.0) return -std::log1p(std::exp(-x));
  return x - std::log1p(std::exp(x));
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double triple_log_likelihood(double score, Label label) {
  return label == Label::kPositive ? log_sigmoid(score) : log_sigmoid(-score);
}

double triple_log_likelihood_grad(double score, Label label) {
  // d/dx log σ(x) = σ(−x); d/dx log σ(−x) = −σ(x).
  return label == Label::kPositive ? sigmoid(-score) : -sigmoid(score);
}

std::vector<std::pair<Triple, double>> corruption_distribution(const TruthIndex& exclude, std::size_t num_entities,
                                                               const Triple& positive) {
  std::map<Triple, double> mass;
  const double n = static_cast<double>(num_entities);
  for (const bool corrupt_object : {true, false}) {
    std::size_t invalid = 0;
    for (EntityId e = 0; e < num_entities; ++e) {
      Triple c = positive;
      (corrupt_object ? c.object : c.subject) = e;
      if (exclude.contains(c)) ++invalid;
    }
    const double f = static_cast<double>(invalid) / n;
    // Accepted draws are uniform over valid candidates; the fallback (every
    // attempt rejected) is uniform over the invalid ones.
    const double p_fallback = std::pow(f, kMaxCorruptionAttempts);
    const double p_valid = invalid == num_entities ? 0.0 : (1.0 - p_fallback) / (n - static_cast<double>(invalid));
    const double p_invalid = invalid == 0 ? 0.0 : p_fallback / static_cast<double>(invalid);
    for (EntityId e = 0; e < num_entities; ++e) {
      Triple c = positive;
      (corrupt_object ? c.object : c.subject) = e;
      const double p = 0.5 * (exclude.contains(c) ? p_invalid : p_valid);
      if (p > 0.0) mass[c] += p;
    }
  }
  return {mass.begin(), mass.end()};
}

MinibatchDraw draw_minibatch(std::span<const Triple> batch, const DatasetSplit& split, std::size_t width, Rng& rng) {
  MinibatchDraw draw;
  draw.terms.reserve(2 * batch.size());
  for (const auto& pos : batch) draw.terms.push_back({pos, Label::kPositive, 1.0});
  for (const auto& pos : batch) draw.terms.push_back({negative_sample(split, pos, rng), Label::kNegative, 1.0});

  for (const auto& term : draw.terms) {
    draw.noise.try_emplace(Symbol::entity(term.triple.subject));
    draw.noise.try_emplace(Symbol::entity(term.triple.object));
    draw.noise.try_emplace(Symbol::relation(term.triple.relation));
  }
  for (auto& [_, noise] : draw.noise) noise = NoiseDraw::standard_normal(width, rng);
  return draw;
}

ElboBreakdown evaluate_elbo(const VariationalModel& model, const MinibatchDraw& draw, double kl_scale,
                            ModelGradients* gradients, double likelihood_weight) {
  const std::size_t d = model.width();
  const Scorer scorer = model.spec().scorer;

  std::map<Symbol, std::vector<double>> z;
  std::map<Symbol, std::vector<double>> dz;
  for (const auto& [sym, noise] : draw.noise) {
    const auto slot = model.layout().locate(sym);
    auto& v = z[sym];
    v.resize(d);
    sample_embedding_into(model.tables()[slot.table], slot.row, noise.epsilon, v);
    if (gradients) dz[sym].assign(d, 0.0);
  }
  auto lookup = [](auto& m, Symbol s) -> auto& {
    auto it = m.find(s);
    if (it == m.end()) throw UsageError("minibatch draw is missing noise for a term symbol");
    return it->second;
  };

  ElboBreakdown out;
  for (const auto& term : draw.terms) {
    const auto se = Symbol::entity(term.triple.subject);
    const auto re = Symbol::relation(term.triple.relation);
    const auto oe = Symbol::entity(term.triple.object);
    const auto& zs = lookup(z, se);
    const auto& zr = lookup(z, re);
    const auto& zo = lookup(z, oe);
    const double x = score(scorer, zs, zr, zo);
    const double ll = likelihood_weight * term.weight * triple_log_likelihood(x, term.label);
    (term.label == Label::kPositive ? out.ll_positive : out.ll_negative) += ll;
    if (gradients && likelihood_weight != 0.0) {
      const double coeff = likelihood_weight * term.weight * triple_log_likelihood_grad(x, term.label);
      accumulate_score_gradients(scorer, zs, zr, zo, coeff, lookup(dz, se), lookup(dz, re), lookup(dz, oe));
    }
  }

  out.kl_total = kl_scale * model.total_kl();
  out.elbo = out.ll_positive + out.ll_negative - out.kl_total;

  if (gradients) {
    *gradients = ModelGradients::zeros_like(model);
    for (const auto& [sym, g] : dz) {
      const auto slot = model.layout().locate(sym);
      const auto& table = model.tables()[slot.table];
      const auto lv = table.log_variance(slot.row);
      const auto& eps = draw.noise.at(sym).epsilon;
      auto& gt = gradients->tables[slot.table];
      for (std::size_t i = 0; i < d; ++i) {
        gt.d_means[slot.row * d + i] += g[i];
        gt.d_log_variances[slot.row * d + i] += g[i] * 0.5 * std::exp(0.5 * lv[i]) * eps[i];
      }
    }
    for (std::size_t t = 0; t < model.tables().size(); ++t) {
      const auto& table = model.tables()[t];
      auto& gt = gradients->tables[t];
      const auto mu = table.means();
      const auto lv = table.log_variances();
      for (std::size_t i = 0; i < mu.size(); ++i) {
        gt.d_means[i] -= kl_scale * mu[i];
        gt.d_log_variances[i] -= kl_scale * 0.5 * (std::exp(lv[i]) - 1.0);
      }
    }
  }
  return out;
}

MinibatchResult elbo_minibatch(const VariationalModel& model, std::span<const Triple> batch,
                               const DatasetSplit& split, Rng& rng, const ObjectiveOptions& options) {
  if (batch.empty()) throw UsageError("elbo_minibatch: empty batch");
  if (split.train().empty()) throw UsageError("elbo_minibatch: empty training set");
  MinibatchResult result;
  result.draw = draw_minibatch(batch, split, model.width(), rng);
  const double kl_scale = static_cast<double>(batch.size()) / static_cast<double>(split.train().size());
  result.breakdown = evaluate_elbo(model, result.draw, kl_scale, &result.gradients, options.likelihood_weight);
  result.touched.reserve(result.draw.noise.size());
  for (const auto& [sym, _] : result.draw.noise) result.touched.push_back(sym);
  return result;
}

ElboBreakdown exact_elbo(const VariationalModel& model, const DatasetSplit& split, std::size_t mc_samples, Rng& rng,
                         NegativeWeighting weighting) {
  if (mc_samples == 0) throw UsageError("exact_elbo: mc_samples must be >= 1");
  const std::size_t ne = model.num_entities();
  const std::size_t nr = model.num_relations();
  if (ne != split.num_entities() || nr != split.num_relations()) {
    throw UsageError("exact_elbo: model and split vocabularies differ");
  }
  const double total = static_cast<double>(ne) * static_cast<double>(nr) * static_cast<double>(ne);
  if (total > static_cast<double>(kMaxExactTriples)) {
    throw CapacityError("exact_elbo: " + std::to_string(ne) + "x" + std::to_string(nr) + "x" + std::to_string(ne) +
                        " triples exceeds the enumeration limit of " + std::to_string(kMaxExactTriples));
  }

  const auto& train = split.train();
  std::vector<LabeledTriple> terms;
  for (const auto& t : train.triples()) terms.push_back({t, Label::kPositive, 1.0});
  if (weighting == NegativeWeighting::kAllUnobserved) {
    for (EntityId s = 0; s < ne; ++s)
      for (RelationId r = 0; r < nr; ++r)
        for (EntityId o = 0; o < ne; ++o) {
          const Triple t{s, r, o};
          if (!train.contains(t)) terms.push_back({t, Label::kNegative, 1.0});
        }
  } else {
    std::map<Triple, double> expected;
    for (const auto& pos : train.triples()) {
      for (const auto& [t, p] : corruption_distribution(train.truth_index(), ne, pos)) expected[t] += p;
    }
    for (const auto& [t, w] : expected) terms.push_back({t, Label::kNegative, w});
  }

  const std::size_t d = model.width();
  const Scorer scorer = model.spec().scorer;
  std::vector<double> ze(ne * d), zr(nr * d), eps(d);
  ElboBreakdown out;
  for (std::size_t sample = 0; sample < mc_samples; ++sample) {
    for (std::uint32_t e = 0; e < ne; ++e) {
      for (auto& x : eps) x = rng.normal();
      const auto slot = model.layout().locate(Symbol::entity(e));
      sample_embedding_into(model.tables()[slot.table], slot.row, eps, std::span<double>(ze).subspan(e * d, d));
    }
    for (std::uint32_t r = 0; r < nr; ++r) {
      for (auto& x : eps) x = rng.normal();
      const auto slot = model.layout().locate(Symbol::relation(r));
      sample_embedding_into(model.tables()[slot.table], slot.row, eps, std::span<double>(zr).subspan(r * d, d));
    }
    double pos = 0.0, neg = 0.0;
    for (const auto& term : terms) {
      const auto& t = term.triple;
      const double x = score(scorer, std::span<const double>(ze).subspan(t.subject * d, d),
                             std::span<const double>(zr).subspan(t.relation * d, d),
                             std::span<const double>(ze).subspan(t.object * d, d));
      (term.label == Label::kPositive ? pos : neg) += term.weight * triple_log_likelihood(x, term.label);
    }
    out.ll_positive += pos;
    out.ll_negative += neg;
  }
  out.ll_positive /= static_cast<double>(mc_samples);
  out.ll_negative /= static_cast<double>(mc_samples);
  out.kl_total = model.total_kl();
  out.elbo = out.ll_positive + out.ll_negative - out.kl_total;
  return out;
}

}  // namespace vkge
