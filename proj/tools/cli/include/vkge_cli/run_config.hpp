#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "vkge/kg.hpp"
#include "vkge/training.hpp"

namespace vkge::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumeric = 3;
inline constexpr int kExitMismatch = 4;

// Data and checkpoint disagree (vocabulary sizes, model shape).
class ArtifactMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DataSource {
  // Either pre-split files...
  std::optional<std::filesystem::path> train;
  std::optional<std::filesystem::path> valid;
  std::optional<std::filesystem::path> test;
  // ...or one file split at load time.
  std::optional<std::filesystem::path> triples;
  SplitFractions fractions;
  std::uint64_t split_seed = 0;

  bool empty() const { return !train && !triples; }
};

struct RunConfig {
  DataSource data;
  TrainConfig train;
  std::filesystem::path output_dir = "vkge_out";
};

// Parses the JSON config; relative paths resolve against the config file's
// directory. Throws ConfigError naming the path or the offending key.
RunConfig load_run_config(const std::filesystem::path& path);
RunConfig parse_run_config(const std::string& json_text, const std::filesystem::path& base_dir);

// Reads the TSV files. Pre-split files share one vocabulary, filled in train,
// valid, test order. Throws ConfigError for missing files.
DatasetSplit load_dataset(const DataSource& source);

}  // namespace vkge::cli
