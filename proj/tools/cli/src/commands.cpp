#include "vkge_cli/commands.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <map>

#include <CLI11.hpp>

#include "vkge/checkpoint.hpp"
#include "vkge/error.hpp"
#include "vkge/synthetic.hpp"
#include "vkge/training.hpp"
#include "vkge/uncertainty.hpp"
#include "vkge_cli/reports.hpp"
#include "vkge_cli/run_config.hpp"

namespace vkge::cli {
namespace {

namespace fs = std::filesystem;

// Seeds analysis randomness apart from the training streams.
constexpr std::uint64_t kAnalysisStream = 4;

struct DataOptions {
  std::string config;
  std::string train, valid, test, triples;
  std::uint64_t split_seed = 0;
  CLI::Option* split_seed_opt = nullptr;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--config", config, "JSON run config (data, train, output_dir)");
    cmd.add_option("--train", train, "training triples (TSV)");
    cmd.add_option("--valid", valid, "validation triples (TSV)");
    cmd.add_option("--test", test, "test triples (TSV)");
    cmd.add_option("--triples", triples, "single TSV to split 80/10/10");
    split_seed_opt = cmd.add_option("--split-seed", split_seed, "seed for splitting --triples");
  }

  bool has_files() const { return !train.empty() || !valid.empty() || !test.empty() || !triples.empty(); }

  // Explicit files replace the config's data block.
  RunConfig resolve() const {
    RunConfig cfg = config.empty() ? RunConfig{} : load_run_config(config);
    if (has_files()) {
      DataSource d;
      auto opt = [](const std::string& s) { return s.empty() ? std::nullopt : std::optional<fs::path>(s); };
      d.train = opt(train);
      d.valid = opt(valid);
      d.test = opt(test);
      d.triples = opt(triples);
      if (d.triples && (d.train || d.valid || d.test)) {
        throw ConfigError("give either --triples or --train/--valid/--test");
      }
      if (!d.triples && !d.train) throw ConfigError("--valid/--test need --train");
      if (d.triples && cfg.data.triples) {
        d.fractions = cfg.data.fractions;
        d.split_seed = cfg.data.split_seed;
      }
      cfg.data = d;
    }
    if (split_seed_opt->count()) cfg.data.split_seed = split_seed;
    if (cfg.data.empty()) throw ConfigError("no data given: use --config or --train/--triples");
    return cfg;
  }
};

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw ConfigError("cannot write " + path.string());
}

template <typename F>
void write_with(const fs::path& path, F&& fill) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  fill(out);
  if (!out) throw ConfigError("failed writing " + path.string());
}

Checkpoint load_matching(const std::string& path, const DatasetSplit& split) {
  Checkpoint ckpt = load_checkpoint(path);
  if (ckpt.num_entities() != split.num_entities() || ckpt.num_relations() != split.num_relations()) {
    throw ArtifactMismatch("checkpoint has " + std::to_string(ckpt.num_entities()) + " entities and " +
                           std::to_string(ckpt.num_relations()) + " relations but the data has " +
                           std::to_string(split.num_entities()) + " and " + std::to_string(split.num_relations()));
  }
  return ckpt;
}

fs::path default_output_dir(const DataOptions& data, const RunConfig& cfg, const std::string& checkpoint) {
  if (!data.config.empty()) return cfg.output_dir;
  const fs::path p(checkpoint);
  return p.has_parent_path() ? p.parent_path() : fs::path(".");
}

struct TrainCommand {
  std::string config;
  std::string output_dir;
  std::size_t epochs = 0, validate_every = 0, batch_size = 0, embedding_dim = 0;
  double learning_rate = 0.0, likelihood_weight = 0.0;
  std::uint64_t seed = 0;
  std::string model, scorer;
  std::map<std::string, CLI::Option*> given;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--config", config, "JSON run config")->required();
    given["output_dir"] = cmd.add_option("--output-dir", output_dir, "overrides output_dir");
    given["epochs"] = cmd.add_option("--epochs", epochs);
    given["validate_every"] = cmd.add_option("--validate-every", validate_every);
    given["batch_size"] = cmd.add_option("--batch-size", batch_size);
    given["embedding_dim"] = cmd.add_option("--embedding-dim", embedding_dim);
    given["learning_rate"] = cmd.add_option("--learning-rate", learning_rate);
    given["likelihood_weight"] = cmd.add_option("--likelihood-weight", likelihood_weight);
    given["seed"] = cmd.add_option("--seed", seed);
    given["model"] = cmd.add_option("--model", model, "LIM or LFM");
    given["scorer"] = cmd.add_option("--scorer", scorer, "DistMult or ComplEx");
  }

  bool has(const char* key) const { return given.at(key)->count() > 0; }

  int execute(std::ostream& out, std::ostream& err) const {
    RunConfig cfg = load_run_config(config);
    auto& t = cfg.train;
    if (has("output_dir")) cfg.output_dir = output_dir;
    if (has("epochs")) t.epochs = epochs;
    if (has("validate_every")) t.validate_every = validate_every;
    if (has("batch_size")) t.batch_size = batch_size;
    if (has("embedding_dim")) t.model.rank = embedding_dim;
    if (has("learning_rate")) t.adam.learning_rate = learning_rate;
    if (has("likelihood_weight")) t.likelihood_weight = likelihood_weight;
    if (has("seed")) t.seed = seed;
    if (has("model")) t.model.grouping = parse_grouping(model);
    if (has("scorer")) t.model.scorer = parse_scorer(scorer);
    t.validate();

    const DatasetSplit split = load_dataset(cfg.data);
    fs::create_directories(cfg.output_dir);
    const fs::path log_path = cfg.output_dir / "train_log.jsonl";
    std::ofstream log(log_path, std::ios::binary);
    if (!log) throw ConfigError("cannot write " + log_path.string());

    TrainOptions options;
    options.abort_checkpoint = cfg.output_dir / "abort_checkpoint.vkge";
    options.on_epoch = [&](const EpochRecord& r) { log << epoch_record_json(r) << '\n'; };

    TrainResult result;
    try {
      result = train(split, t, options);
    } catch (const NumericError& e) {
      log.flush();
      err << "training aborted: " << e.what() << "\n"
          << "optimiser state written to " << options.abort_checkpoint->string() << "\n";
      return kExitNumeric;
    }
    log.close();

    save_checkpoint(result.checkpoint, cfg.output_dir / "checkpoint.vkge");
    RankingReport valid_report;
    if (result.best_validation) {
      valid_report = *result.best_validation;
    }
    write_text(cfg.output_dir / "valid_report.json",
               ranking_report_json(valid_report, "valid", result.checkpoint.step));

    out << "trained " << to_string(t.model.scorer) << " (" << to_string(t.model.grouping) << ", k=" << t.model.rank
        << ") for " << t.epochs << " epochs on " << split.train().size() << " triples\n";
    if (result.best_validation) {
      out << "best epoch " << result.best_epoch << ", " << ranking_report_table(valid_report, "valid",
                                                                                HitsProtocol::kFiltered);
    } else {
      out << "no validation split; kept the final model\n";
    }
    out << "wrote " << (cfg.output_dir / "checkpoint.vkge").string() << "\n";
    return kExitOk;
  }
};

struct EvaluateCommand {
  DataOptions data;
  std::string checkpoint;
  std::string which = "test";
  std::string output_dir;
  bool raw = false, filtered = false;

  void add_to(CLI::App& cmd) {
    data.add_to(cmd);
    cmd.add_option("--checkpoint", checkpoint)->required();
    cmd.add_option("--split", which, "valid or test")->check(CLI::IsMember({"valid", "test"}));
    cmd.add_option("--output-dir", output_dir, "report directory");
    auto* r = cmd.add_flag("--raw", raw, "Hits@m over all entities");
    auto* f = cmd.add_flag("--filtered", filtered, "Hits@m over filtered candidates (default)");
    r->excludes(f);
  }

  int execute(std::ostream& out, std::ostream&) const {
    const RunConfig cfg = data.resolve();
    const DatasetSplit split = load_dataset(cfg.data);
    const Checkpoint ckpt = load_matching(checkpoint, split);
    const auto part = which == "valid" ? EvalSplit::kValid : EvalSplit::kTest;
    const RankingReport report = evaluate(ckpt.model, split, part);

    const fs::path dir = output_dir.empty() ? default_output_dir(data, cfg, checkpoint) : fs::path(output_dir);
    const auto protocol = raw ? HitsProtocol::kRaw : HitsProtocol::kFiltered;
    const std::string table = ranking_report_table(report, which, protocol);
    write_text(dir / (which + "_report.json"), ranking_report_json(report, which, ckpt.step));
    write_text(dir / (which + "_report.txt"), table);
    out << table;
    return kExitOk;
  }
};

struct AnalyzeCommand {
  DataOptions data;
  std::string checkpoint;
  std::string mode;
  std::string estimator = "magnitude";
  std::size_t samples = 100;
  std::size_t n_points = 1000;
  std::uint64_t seed = 0;
  CLI::Option* seed_opt = nullptr;
  std::string output;

  void add_to(CLI::App& cmd) {
    data.add_to(cmd);
    cmd.add_option("--checkpoint", checkpoint)->required();
    cmd.add_option("--mode", mode, "precision-coverage or variance-frequency")->required();
    cmd.add_option("--estimator", estimator, "magnitude or sampled");
    cmd.add_option("--samples", samples, "forward samples per triple (sampled estimator)");
    cmd.add_option("--n-points", n_points, "coverage grid size");
    seed_opt = cmd.add_option("--seed", seed, "defaults to the config's train seed");
    cmd.add_option("--output", output, "CSV path");
  }

  int execute(std::ostream& out, std::ostream& err) const {
    if (mode != "precision-coverage" && mode != "variance-frequency") {
      err << "unknown mode '" << mode << "' (expected precision-coverage or variance-frequency)\n";
      return kExitUsage;
    }
    const RunConfig cfg = data.resolve();
    const DatasetSplit split = load_dataset(cfg.data);
    const Checkpoint ckpt = load_matching(checkpoint, split);
    const fs::path dir = default_output_dir(data, cfg, checkpoint);

    if (mode == "precision-coverage") {
      const auto est = parse_estimator(estimator);
      Rng rng = Rng::stream(seed_opt->count() ? seed : cfg.train.seed, kAnalysisStream);
      const auto predictions = link_predictions(ckpt.model, split, est, samples, rng);
      const auto report = precision_coverage(predictions, n_points, est);
      const fs::path path = output.empty() ? dir / "precision_coverage.csv" : fs::path(output);
      write_with(path, [&](std::ostream& o) { write_precision_coverage_csv(o, report); });
      out << "precision at full coverage " << format_g9(report.rows.front().precision) << " over "
          << predictions.size() << " predictions (" << to_string(est) << ")\n";
      out << "wrote " << path.string() << "\n";
    } else {
      const auto rows = variance_frequency_table(ckpt.model, split);
      const auto summary = summarize_frequency_variance(rows);
      const fs::path path = output.empty() ? dir / "variance_frequency.csv" : fs::path(output);
      write_with(path, [&](std::ostream& o) { write_variance_frequency_csv(o, rows, split.vocabulary()); });
      out << "spearman(log1p frequency, mean variance) entities " << format_g9(summary.entity_spearman)
          << ", relations " << format_g9(summary.relation_spearman) << "\n";
      out << "wrote " << path.string() << "\n";
    }
    return kExitOk;
  }
};

struct ExportCommand {
  DataOptions data;
  std::string checkpoint;
  std::string what;
  std::string output;

  void add_to(CLI::App& cmd) {
    data.add_to(cmd);
    cmd.add_option("--checkpoint", checkpoint, "required for means and logvars");
    cmd.add_option("--what", what, "means, logvars or vocab")->required();
    cmd.add_option("--output", output, "CSV path, or a directory for vocab")->required();
  }

  int execute(std::ostream& out, std::ostream& err) const {
    if (what != "means" && what != "logvars" && what != "vocab") {
      err << "unknown export target '" << what << "' (expected means, logvars or vocab)\n";
      return kExitUsage;
    }
    if (what == "vocab") {
      const RunConfig cfg = data.resolve();
      const DatasetSplit split = load_dataset(cfg.data);
      if (!checkpoint.empty()) load_matching(checkpoint, split);
      const fs::path dir(output);
      write_with(dir / "entities.tsv", [&](std::ostream& o) { write_vocabulary_dump(o, split.vocabulary().entities); });
      write_with(dir / "relations.tsv",
                 [&](std::ostream& o) { write_vocabulary_dump(o, split.vocabulary().relations); });
      out << "wrote " << (dir / "entities.tsv").string() << " and " << (dir / "relations.tsv").string() << "\n";
      return kExitOk;
    }
    if (checkpoint.empty()) throw ConfigError("--checkpoint is required to export " + what);
    const Checkpoint ckpt = load_checkpoint(checkpoint);
    const auto field = what == "means" ? TableField::kMeans : TableField::kLogVariances;
    write_with(output, [&](std::ostream& o) { write_embedding_csv(o, ckpt.model, field); });
    out << "wrote " << output << "\n";
    return kExitOk;
  }
};

struct GenerateCommand {
  SyntheticKgConfig config;
  std::string output;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--output", output, "TSV path")->required();
    cmd.add_option("--entities", config.num_entities);
    cmd.add_option("--relations", config.num_relations);
    cmd.add_option("--latent-rank", config.latent_rank);
    cmd.add_option("--pairs", config.pairs_per_relation, "entity pairs per relation");
    cmd.add_option("--skew", config.popularity_skew, "popularity ratio between the most and least popular entity");
    cmd.add_option("--seed", config.seed);
  }

  int execute(std::ostream& out, std::ostream&) const {
    const KnowledgeGraph kg = make_synthetic_kg(config);
    write_with(output, [&](std::ostream& o) { write_triples(o, kg.vocabulary(), kg.triples()); });
    out << "wrote " << kg.size() << " triples to " << output << "\n";
    return kExitOk;
  }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Variational knowledge graph embeddings", "vkge"};
  app.require_subcommand(1);

  TrainCommand train_cmd;
  EvaluateCommand evaluate_cmd;
  AnalyzeCommand analyze_cmd;
  ExportCommand export_cmd;
  GenerateCommand generate_cmd;
  std::vector<std::pair<CLI::App*, std::function<int()>>> commands;
  auto add = [&](auto& cmd, const char* name, const char* help) {
    CLI::App* sub = app.add_subcommand(name, help);
    cmd.add_to(*sub);
    commands.emplace_back(sub, [&cmd, &out, &err] { return cmd.execute(out, err); });
  };
  add(train_cmd, "train", "train a model from a JSON config");
  add(evaluate_cmd, "evaluate", "rank the valid or test split");
  add(analyze_cmd, "analyze", "uncertainty analyses");
  add(export_cmd, "export", "dump embedding tables or the vocabulary");
  add(generate_cmd, "generate", "write a synthetic knowledge graph");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    for (auto& [sub, exec] : commands) {
      if (sub->parsed()) return exec();
    }
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "data error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const ArtifactMismatch& e) {
    err << "artifact mismatch: " << e.what() << "\n";
    return kExitMismatch;
  } catch (const CheckpointError& e) {
    err << "checkpoint error: " << e.what() << "\n";
    return kExitMismatch;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace vkge::cli
