#include "vkge_cli/reports.hpp"

#include <cstdio>
#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace vkge::cli {
namespace {

using nlohmann::ordered_json;

ordered_json metrics_json(const RankingMetrics& m) {
  return ordered_json{{"mean_rank", m.mean_rank},   {"mean_reciprocal_rank", m.mean_reciprocal_rank},
                      {"hits_at_1", m.hits_at_1},   {"hits_at_3", m.hits_at_3},
                      {"hits_at_10", m.hits_at_10}, {"queries", m.queries}};
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

const char* kind_name(SymbolKind k) { return k == SymbolKind::kEntity ? "entity" : "relation"; }

}  // namespace

std::string format_g9(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

std::string ranking_report_json(const RankingReport& report, std::string_view split, std::uint64_t step) {
  ordered_json j;
  j["split"] = split;
  j["step"] = step;
  j["filtered"] = metrics_json(report.filtered);
  j["raw"] = metrics_json(report.raw);
  return j.dump(2) + "\n";
}

std::string ranking_report_table(const RankingReport& report, std::string_view split, HitsProtocol hits) {
  const RankingMetrics& h = hits == HitsProtocol::kFiltered ? report.filtered : report.raw;
  std::ostringstream out;
  const char* hits_tag = hits == HitsProtocol::kFiltered ? "filtered" : "raw";
  out << std::left << std::setw(8) << "Split" << std::right << std::setw(12) << "MR Filter" << std::setw(12)
      << "MR Raw" << std::setw(10) << "Hits@1" << std::setw(10) << "Hits@3" << std::setw(10) << "Hits@10" << "\n";
  out << std::left << std::setw(8) << split << std::right << std::fixed << std::setprecision(3) << std::setw(12)
      << report.filtered.mean_rank << std::setw(12) << report.raw.mean_rank << std::setw(10) << h.hits_at_1
      << std::setw(10) << h.hits_at_3 << std::setw(10) << h.hits_at_10 << "\n";
  out << "(" << report.filtered.queries << " queries; Hits@m " << hits_tag << ")\n";
  return out.str();
}

std::string epoch_record_json(const EpochRecord& r) {
  ordered_json j;
  j["epoch"] = r.epoch;
  j["step"] = r.step;
  j["batches"] = r.batches;
  j["ll_positive"] = r.elbo.ll_positive;
  j["ll_negative"] = r.elbo.ll_negative;
  j["kl"] = r.elbo.kl_total;
  j["elbo"] = r.elbo.elbo;
  if (r.validation) {
    j["validation"] = ordered_json{{"filtered", metrics_json(r.validation->filtered)},
                                   {"raw_mean_rank", r.validation->raw_mean_rank},
                                   {"improved", r.validation->improved}};
  }
  return j.dump();
}

void write_precision_coverage_csv(std::ostream& out, const ConfidenceReport& report) {
  out << "coverage,threshold,precision\n";
  for (const auto& row : report.rows) {
    out << format_g9(row.coverage) << ',' << format_g9(row.threshold) << ',' << format_g9(row.precision) << '\n';
  }
}

void write_variance_frequency_csv(std::ostream& out, std::span<const FrequencyVarianceRow> rows,
                                  const Vocabulary& vocab) {
  out << "kind,id,name,frequency,log1p_frequency,mean_variance\n";
  for (const auto& row : rows) {
    const auto& names = row.kind == SymbolKind::kEntity ? vocab.entities : vocab.relations;
    out << kind_name(row.kind) << ',' << row.id << ',' << csv_field(names.name(row.id)) << ',' << row.frequency << ','
        << format_g9(row.log1p_frequency) << ',' << format_g9(row.mean_variance) << '\n';
  }
}

void write_embedding_csv(std::ostream& out, const VariationalModel& model, TableField field) {
  const std::size_t d = model.width();
  out << "kind,id";
  for (std::size_t i = 0; i < d; ++i) out << ",v" << i;
  out << '\n';
  auto emit = [&](Symbol s) {
    const auto values = field == TableField::kMeans ? model.mean(s) : model.log_variance(s);
    out << kind_name(s.kind) << ',' << s.id;
    for (double v : values) out << ',' << format_g9(v);
    out << '\n';
  };
  for (std::uint32_t e = 0; e < model.num_entities(); ++e) emit(Symbol::entity(e));
  for (std::uint32_t r = 0; r < model.num_relations(); ++r) emit(Symbol::relation(r));
}

}  // namespace vkge::cli
