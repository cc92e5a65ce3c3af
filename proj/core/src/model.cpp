#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "vkge/error.hpp"
#include "vkge/model_spec.hpp"
#include "vkge/variational.hpp"

namespace vkge {
namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

}  // namespace

std::string_view to_string(Scorer s) { return s == Scorer::kComplEx ? "ComplEx" : "DistMult"; }
std::string_view to_string(Grouping g) { return g == Grouping::kLFM ? "LFM" : "LIM"; }

Scorer parse_scorer(std::string_view name) {
  const auto n = lower(name);
  if (n == "distmult") return Scorer::kDistMult;
  if (n == "complex") return Scorer::kComplEx;
  throw ConfigError("unknown scorer '" + std::string(name) + "' (expected DistMult or ComplEx)");
}

Grouping parse_grouping(std::string_view name) {
  const auto n = lower(name);
  if (n == "lim") return Grouping::kLIM;
  if (n == "lfm") return Grouping::kLFM;
  throw ConfigError("unknown model '" + std::string(name) + "' (expected LIM or LFM)");
}

LatentLayout::LatentLayout(Grouping grouping, std::size_t num_entities, std::size_t num_relations)
    : grouping_(grouping), num_entities_(num_entities), num_relations_(num_relations) {}

std::size_t LatentLayout::table_rows(std::size_t table) const {
  if (grouping_ == Grouping::kLFM) return num_entities_ + num_relations_;
  return table == 0 ? num_entities_ : num_relations_;
}

TableSlot LatentLayout::locate(Symbol symbol) const {
  if (symbol.kind == SymbolKind::kEntity) {
    if (symbol.id >= num_entities_) throw IndexError("entity id " + std::to_string(symbol.id) + " out of range");
    return {0, symbol.id};
  }
  if (symbol.id >= num_relations_) throw IndexError("relation id " + std::to_string(symbol.id) + " out of range");
  if (grouping_ == Grouping::kLFM) return {0, num_entities_ + symbol.id};
  return {1, symbol.id};
}

Symbol LatentLayout::symbol_at(std::size_t table, std::size_t row) const {
  if (table >= num_tables() || row >= table_rows(table)) throw IndexError("slot out of range");
  if (grouping_ == Grouping::kLFM) {
    return row < num_entities_ ? Symbol::entity(static_cast<std::uint32_t>(row))
                               : Symbol::relation(static_cast<std::uint32_t>(row - num_entities_));
  }
  return table == 0 ? Symbol::entity(static_cast<std::uint32_t>(row)) : Symbol::relation(static_cast<std::uint32_t>(row));
}

VariationalModel::VariationalModel(const ModelSpec& spec, std::size_t num_entities, std::size_t num_relations)
    : spec_(spec), layout_(spec.grouping, num_entities, num_relations) {
  if (spec.rank == 0) throw ConfigError("embedding rank must be >= 1");
  for (std::size_t t = 0; t < layout_.num_tables(); ++t) tables_.emplace_back(layout_.table_rows(t), spec.width());
}

VariationalModel VariationalModel::initialize(const ModelSpec& spec, std::size_t num_entities,
                                              std::size_t num_relations, Rng& rng) {
  VariationalModel model(spec, num_entities, num_relations);
  const double stddev = 1.0 / std::sqrt(static_cast<double>(spec.width()));
  // Fill in symbol order so LIM and LFM draw identical initial values.
  auto fill = [&](Symbol s) {
    for (auto& m : model.mean(s)) m = stddev * rng.normal();
  };
  for (std::uint32_t e = 0; e < num_entities; ++e) fill(Symbol::entity(e));
  for (std::uint32_t r = 0; r < num_relations; ++r) fill(Symbol::relation(r));
  return model;
}

std::span<const double> VariationalModel::mean(Symbol s) const {
  const auto slot = layout_.locate(s);
  return tables_[slot.table].mean(slot.row);
}

std::span<double> VariationalModel::mean(Symbol s) {
  const auto slot = layout_.locate(s);
  return tables_[slot.table].mean(slot.row);
}

std::span<const double> VariationalModel::log_variance(Symbol s) const {
  const auto slot = layout_.locate(s);
  return tables_[slot.table].log_variance(slot.row);
}

std::span<double> VariationalModel::log_variance(Symbol s) {
  const auto slot = layout_.locate(s);
  return tables_[slot.table].log_variance(slot.row);
}

double VariationalModel::total_kl() const {
  double kl = 0.0;
  for (const auto& t : tables_) kl += kl_unit_gaussian(t);
  return kl;
}

VariationalModel VariationalModel::quantized() const {
  VariationalModel copy = *this;
  for (auto& t : copy.tables_) {
    for (auto& v : t.means()) v = static_cast<double>(static_cast<float>(v));
    for (auto& v : t.log_variances()) v = static_cast<double>(static_cast<float>(v));
  }
  return copy;
}

ModelGradients ModelGradients::zeros_like(const VariationalModel& model) {
  ModelGradients g;
  for (const auto& t : model.tables()) {
    g.tables.push_back({std::vector<double>(t.means().size(), 0.0), std::vector<double>(t.log_variances().size(), 0.0)});
  }
  return g;
}

void ModelGradients::set_zero() {
  for (auto& t : tables) {
    std::fill(t.d_means.begin(), t.d_means.end(), 0.0);
    std::fill(t.d_log_variances.begin(), t.d_log_variances.end(), 0.0);
  }
}

}  // namespace vkge
