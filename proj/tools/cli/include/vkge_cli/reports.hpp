#pragma once

#include <ostream>
#include <span>
#include <string>
#include <string_view>

#include "vkge/evaluation.hpp"
#include "vkge/training.hpp"
#include "vkge/uncertainty.hpp"

namespace vkge::cli {

// %.9g, enough to round-trip a float.
std::string format_g9(double x);

enum class HitsProtocol { kFiltered, kRaw };

std::string ranking_report_json(const RankingReport& report, std::string_view split, std::uint64_t step);
// Aligned table: Split | MR Filter | MR Raw | Hits@1 | Hits@3 | Hits@10.
std::string ranking_report_table(const RankingReport& report, std::string_view split, HitsProtocol hits);

// One JSON object, no trailing newline.
std::string epoch_record_json(const EpochRecord& record);

// coverage,threshold,precision
void write_precision_coverage_csv(std::ostream& out, const ConfidenceReport& report);
// kind,id,name,frequency,log1p_frequency,mean_variance
void write_variance_frequency_csv(std::ostream& out, std::span<const FrequencyVarianceRow> rows,
                                  const Vocabulary& vocab);

enum class TableField { kMeans, kLogVariances };
// kind,id,v0,...,v{d-1}; entities then relations, one row per symbol.
void write_embedding_csv(std::ostream& out, const VariationalModel& model, TableField field);

}  // namespace vkge::cli
