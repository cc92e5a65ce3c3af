#include "vkge/variational.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vkge/error.hpp"

namespace vkge {

GaussianEmbeddingTable::GaussianEmbeddingTable(std::size_t rows, std::size_t dim, double mean, double log_variance)
    : rows_(rows), dim_(dim), means_(rows * dim, mean), log_variances_(rows * dim, log_variance) {}

void GaussianEmbeddingTable::check_row(std::size_t row) const {
  if (row >= rows_) {
    throw IndexError("row " + std::to_string(row) + " out of range for table of " + std::to_string(rows_) + " rows");
  }
}

std::span<double> GaussianEmbeddingTable::mean(std::size_t row) {
  check_row(row);
  return std::span<double>(means_).subspan(row * dim_, dim_);
}

std::span<const double> GaussianEmbeddingTable::mean(std::size_t row) const {
  check_row(row);
  return std::span<const double>(means_).subspan(row * dim_, dim_);
}

std::span<double> GaussianEmbeddingTable::log_variance(std::size_t row) {
  check_row(row);
  return std::span<double>(log_variances_).subspan(row * dim_, dim_);
}

std::span<const double> GaussianEmbeddingTable::log_variance(std::size_t row) const {
  check_row(row);
  return std::span<const double>(log_variances_).subspan(row * dim_, dim_);
}

void GaussianEmbeddingTable::clamp_log_variances() {
  for (auto& v : log_variances_) v = std::clamp(v, kMinLogVariance, kMaxLogVariance);
}

NoiseDraw NoiseDraw::standard_normal(std::size_t dim, Rng& rng) {
  NoiseDraw n;
  n.epsilon.resize(dim);
  for (auto& e : n.epsilon) e = rng.normal();
  return n;
}

void sample_embedding_into(const GaussianEmbeddingTable& table, std::size_t row, std::span<const double> epsilon,
                           std::span<double> out) {
  const auto mu = table.mean(row);
  const auto lv = table.log_variance(row);
  if (epsilon.size() != table.dim() || out.size() != table.dim()) {
    throw DimensionError("noise length " + std::to_string(epsilon.size()) + " does not match table dim " +
                         std::to_string(table.dim()));
  }
  for (std::size_t i = 0; i < mu.size(); ++i) out[i] = mu[i] + std::exp(0.5 * lv[i]) * epsilon[i];
}

std::vector<double> sample_embedding(const GaussianEmbeddingTable& table, std::size_t row, const NoiseDraw& noise) {
  std::vector<double> out(table.dim());
  sample_embedding_into(table, row, noise.epsilon, out);
  return out;
}

namespace {

double kl_row(std::span<const double> mu, std::span<const double> lv) {
  double acc = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) acc += 0.5 * (mu[i] * mu[i] + std::exp(lv[i]) - lv[i] - 1.0);
  return acc;
}

}  // namespace

double kl_unit_gaussian(const GaussianEmbeddingTable& table, std::span<const std::size_t> rows) {
  double total = 0.0;
  if (rows.empty()) {
    for (std::size_t r = 0; r < table.rows(); ++r) total += kl_row(table.mean(r), table.log_variance(r));
  } else {
    for (auto r : rows) total += kl_row(table.mean(r), table.log_variance(r));
  }
  return total;
}

std::vector<RowGradients> kl_gradients(const GaussianEmbeddingTable& table, std::span<const std::size_t> rows) {
  std::vector<std::size_t> selected(rows.begin(), rows.end());
  if (selected.empty()) {
    selected.resize(table.rows());
    for (std::size_t r = 0; r < table.rows(); ++r) selected[r] = r;
  }
  std::vector<RowGradients> grads;
  grads.reserve(selected.size());
  for (auto r : selected) {
    const auto mu = table.mean(r);
    const auto lv = table.log_variance(r);
    RowGradients g{std::vector<double>(mu.begin(), mu.end()), std::vector<double>(lv.size())};
    for (std::size_t i = 0; i < lv.size(); ++i) g.d_log_variances[i] = 0.5 * (std::exp(lv[i]) - 1.0);
    grads.push_back(std::move(g));
  }
  return grads;
}

RowGradients backprop_through_sample(std::span<const double> score_grad, const NoiseDraw& noise,
                                     std::span<const double> log_variances_row) {
  if (score_grad.size() != noise.epsilon.size() || score_grad.size() != log_variances_row.size()) {
    throw DimensionError("backprop_through_sample: length mismatch");
  }
  RowGradients g{std::vector<double>(score_grad.begin(), score_grad.end()), std::vector<double>(score_grad.size())};
  for (std::size_t i = 0; i < score_grad.size(); ++i) {
    g.d_log_variances[i] = score_grad[i] * 0.5 * std::exp(0.5 * log_variances_row[i]) * noise.epsilon[i];
  }
  return g;
}

}  // namespace vkge
