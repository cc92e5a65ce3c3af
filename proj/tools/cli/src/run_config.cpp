#include "vkge_cli/run_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "vkge/error.hpp"

namespace vkge::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
void read_field(const json& obj, const char* key, const std::string& where, T& out) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return;
  try {
    if constexpr (std::is_unsigned_v<T>) {
      if (!it->is_number_integer() || it->get<long long>() < 0) throw ConfigError("");
    }
    out = it->get<T>();
  } catch (const std::exception&) {
    throw ConfigError("bad value for '" + std::string(key) + "' in " + where);
  }
}

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

std::vector<Triple> read_into(const fs::path& path, Vocabulary& vocab) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open data file " + path.string());
  try {
    return parse_triples_into(in, vocab);
  } catch (const ParseError& e) {
    throw ParseError(0, path.string() + ": " + e.what());
  }
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text, const fs::path& base_dir) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  reject_unknown_keys(root, "config", {"data", "train", "output_dir"});

  RunConfig cfg;
  if (auto it = root.find("data"); it != root.end()) {
    const json& d = *it;
    reject_unknown_keys(d, "data", {"train", "valid", "test", "triples", "split"});
    auto path_of = [&](const char* key) -> std::optional<fs::path> {
      std::string s;
      read_field(d, key, "data", s);
      if (s.empty()) return std::nullopt;
      return resolve(base_dir, s);
    };
    cfg.data.train = path_of("train");
    cfg.data.valid = path_of("valid");
    cfg.data.test = path_of("test");
    cfg.data.triples = path_of("triples");
    if (cfg.data.triples && (cfg.data.train || cfg.data.valid || cfg.data.test)) {
      throw ConfigError("data: give either 'triples' or 'train'/'valid'/'test', not both");
    }
    if (!cfg.data.triples && !cfg.data.train && (cfg.data.valid || cfg.data.test)) {
      throw ConfigError("data: 'valid'/'test' given without 'train'");
    }
    if (auto s = d.find("split"); s != d.end()) {
      if (!cfg.data.triples) throw ConfigError("data: 'split' only applies to 'triples'");
      reject_unknown_keys(*s, "data.split", {"train", "valid", "test", "seed"});
      read_field(*s, "train", "data.split", cfg.data.fractions.train);
      read_field(*s, "valid", "data.split", cfg.data.fractions.valid);
      read_field(*s, "test", "data.split", cfg.data.fractions.test);
      read_field(*s, "seed", "data.split", cfg.data.split_seed);
    }
  }

  if (auto it = root.find("train"); it != root.end()) {
    const json& t = *it;
    reject_unknown_keys(t, "train",
                        {"epochs", "validate_every", "batch_size", "learning_rate", "adam_beta1", "adam_beta2",
                         "adam_epsilon", "embedding_dim", "model", "scorer", "seed", "likelihood_weight"});
    auto& tc = cfg.train;
    read_field(t, "epochs", "train", tc.epochs);
    read_field(t, "validate_every", "train", tc.validate_every);
    read_field(t, "batch_size", "train", tc.batch_size);
    read_field(t, "learning_rate", "train", tc.adam.learning_rate);
    read_field(t, "adam_beta1", "train", tc.adam.beta1);
    read_field(t, "adam_beta2", "train", tc.adam.beta2);
    read_field(t, "adam_epsilon", "train", tc.adam.epsilon);
    read_field(t, "embedding_dim", "train", tc.model.rank);
    read_field(t, "seed", "train", tc.seed);
    read_field(t, "likelihood_weight", "train", tc.likelihood_weight);
    std::string name;
    read_field(t, "model", "train", name);
    if (!name.empty()) tc.model.grouping = parse_grouping(name);
    name.clear();
    read_field(t, "scorer", "train", name);
    if (!name.empty()) tc.model.scorer = parse_scorer(name);
  }

  std::string out;
  read_field(root, "output_dir", "config", out);
  if (!out.empty()) cfg.output_dir = resolve(base_dir, out);
  else cfg.output_dir = base_dir / cfg.output_dir;
  return cfg;
}

RunConfig load_run_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_run_config(text.str(), path.parent_path());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

DatasetSplit load_dataset(const DataSource& source) {
  if (source.empty()) throw ConfigError("no data given (need 'triples' or 'train')");
  if (source.triples) {
    auto vocab = std::make_shared<Vocabulary>();
    auto triples = read_into(*source.triples, *vocab);
    if (triples.empty()) throw ParseError(0, source.triples->string() + ": empty dataset");
    KnowledgeGraph kg(vocab, std::move(triples));
    return split_dataset(kg, source.fractions, source.split_seed);
  }
  auto vocab = std::make_shared<Vocabulary>();
  auto train = read_into(*source.train, *vocab);
  if (train.empty()) throw ParseError(0, source.train->string() + ": empty dataset");
  std::vector<Triple> valid, test;
  if (source.valid) valid = read_into(*source.valid, *vocab);
  if (source.test) test = read_into(*source.test, *vocab);
  return DatasetSplit(vocab, std::move(train), std::move(valid), std::move(test));
}

}  // namespace vkge::cli
