#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "vkge/model_spec.hpp"
#include "vkge/rng.hpp"

namespace vkge {

inline constexpr double kMinLogVariance = -20.0;
inline constexpr double kMaxLogVariance = 5.0;
inline constexpr double kInitialLogVariance = -6.0;

// Diagonal Gaussian q(z) = N(mean, exp(log_variance)) per row.
class GaussianEmbeddingTable {
 public:
  GaussianEmbeddingTable() = default;
  GaussianEmbeddingTable(std::size_t rows, std::size_t dim, double mean = 0.0,
                         double log_variance = kInitialLogVariance);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t dim() const noexcept { return dim_; }

  // Throw IndexError when row >= rows().
  std::span<double> mean(std::size_t row);
  std::span<const double> mean(std::size_t row) const;
  std::span<double> log_variance(std::size_t row);
  std::span<const double> log_variance(std::size_t row) const;

  std::span<double> means() noexcept { return means_; }
  std::span<const double> means() const noexcept { return means_; }
  std::span<double> log_variances() noexcept { return log_variances_; }
  std::span<const double> log_variances() const noexcept { return log_variances_; }

  void clamp_log_variances();

  friend bool operator==(const GaussianEmbeddingTable&, const GaussianEmbeddingTable&) = default;

 private:
  void check_row(std::size_t row) const;

  std::size_t rows_ = 0;
  std::size_t dim_ = 0;
  std::vector<double> means_;
  std::vector<double> log_variances_;
};

// Reparameterisation noise ε for one symbol.
struct NoiseDraw {
  std::vector<double> epsilon;

  static NoiseDraw standard_normal(std::size_t dim, Rng& rng);
  static NoiseDraw zeros(std::size_t dim) { return {std::vector<double>(dim, 0.0)}; }
};

// mean + exp(0.5·log σ²) ⊙ ε
std::vector<double> sample_embedding(const GaussianEmbeddingTable& table, std::size_t row, const NoiseDraw& noise);
void sample_embedding_into(const GaussianEmbeddingTable& table, std::size_t row, std::span<const double> epsilon,
                           std::span<double> out);

// Σ 0.5·(μ² + σ² − log σ² − 1) over the selected rows (all rows when empty).
double kl_unit_gaussian(const GaussianEmbeddingTable& table, std::span<const std::size_t> rows = {});

struct RowGradients {
  std::vector<double> d_means;
  std::vector<double> d_log_variances;
};

// dKL/dμ = μ, dKL/dlog σ² = 0.5·(σ² − 1), one entry per selected row.
std::vector<RowGradients> kl_gradients(const GaussianEmbeddingTable& table, std::span<const std::size_t> rows = {});

// Chain rule through z = μ + σ ⊙ ε: ∂z/∂μ = 1, ∂z/∂log σ² = 0.5·σ·ε.
RowGradients backprop_through_sample(std::span<const double> score_grad, const NoiseDraw& noise,
                                     std::span<const double> log_variances_row);

enum class SymbolKind : std::uint8_t { kEntity = 0, kRelation = 1 };

struct Symbol {
  SymbolKind kind = SymbolKind::kEntity;
  std::uint32_t id = 0;

  static Symbol entity(std::uint32_t e) { return {SymbolKind::kEntity, e}; }
  static Symbol relation(std::uint32_t r) { return {SymbolKind::kRelation, r}; }

  friend bool operator==(const Symbol&, const Symbol&) = default;
  friend auto operator<=>(const Symbol&, const Symbol&) = default;
};

struct TableSlot {
  std::size_t table = 0;
  std::size_t row = 0;
};

// Maps symbols onto (table, row) for a grouping.
class LatentLayout {
 public:
  LatentLayout() = default;
  LatentLayout(Grouping grouping, std::size_t num_entities, std::size_t num_relations);

  Grouping grouping() const noexcept { return grouping_; }
  std::size_t num_entities() const noexcept { return num_entities_; }
  std::size_t num_relations() const noexcept { return num_relations_; }
  std::size_t num_tables() const noexcept { return grouping_ == Grouping::kLIM ? 2 : 1; }
  std::size_t table_rows(std::size_t table) const;

  // Throws IndexError on out-of-range ids.
  TableSlot locate(Symbol symbol) const;
  Symbol symbol_at(std::size_t table, std::size_t row) const;

  friend bool operator==(const LatentLayout&, const LatentLayout&) = default;

 private:
  Grouping grouping_ = Grouping::kLIM;
  std::size_t num_entities_ = 0;
  std::size_t num_relations_ = 0;
};

// The full set of variational parameters for one model.
class VariationalModel {
 public:
  VariationalModel() = default;
  // Tables start at mean 0 and log σ² = kInitialLogVariance.
  VariationalModel(const ModelSpec& spec, std::size_t num_entities, std::size_t num_relations);

  // Means ~ N(0, (1/√d)²), log σ² = −6.
  static VariationalModel initialize(const ModelSpec& spec, std::size_t num_entities, std::size_t num_relations,
                                     Rng& rng);

  const ModelSpec& spec() const noexcept { return spec_; }
  const LatentLayout& layout() const noexcept { return layout_; }
  std::size_t num_entities() const noexcept { return layout_.num_entities(); }
  std::size_t num_relations() const noexcept { return layout_.num_relations(); }
  std::size_t width() const noexcept { return spec_.width(); }

  std::span<GaussianEmbeddingTable> tables() noexcept { return tables_; }
  std::span<const GaussianEmbeddingTable> tables() const noexcept { return tables_; }

  std::span<const double> mean(Symbol s) const;
  std::span<double> mean(Symbol s);
  std::span<const double> log_variance(Symbol s) const;
  std::span<double> log_variance(Symbol s);

  double total_kl() const;

  // Copy with every parameter rounded to float, the checkpoint storage type.
  VariationalModel quantized() const;

  friend bool operator==(const VariationalModel&, const VariationalModel&) = default;

 private:
  ModelSpec spec_;
  LatentLayout layout_;
  std::vector<GaussianEmbeddingTable> tables_;
};

// Dense gradient buffers shaped like a model's tables.
struct ModelGradients {
  struct Table {
    std::vector<double> d_means;
    std::vector<double> d_log_variances;
  };
  std::vector<Table> tables;

  static ModelGradients zeros_like(const VariationalModel& model);
  void set_zero();
};

}  // namespace vkge
