// Copyright 2026 The MML Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tools/cli.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string_view>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "mml/archive.h"
#include "mml/config_io.h"
#include "mml/dataset.h"
#include "mml/evaluation.h"
#include "mml/manifest.h"
#include "mml/network.h"
#include "mml/sweep.h"
#include "mml/synth.h"
#include "mml/training.h"
#include "tools/run_config.h"

namespace mml::tools {

namespace fs = std::filesystem;
using nlohmann::json;

int ExitClassFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kConfig:
      return kExitConfig;
    case ErrorCode::kIo:
    case ErrorCode::kParse:
    case ErrorCode::kInvalidInterval:
    case ErrorCode::kBadMagic:
    case ErrorCode::kBadVersion:
    case ErrorCode::kTruncated:
    case ErrorCode::kNonFinite:
    case ErrorCode::kDuplicateKey:
    case ErrorCode::kDanglingKey:
    case ErrorCode::kDimMismatch:
    case ErrorCode::kNotFound:
      return kExitData;
    case ErrorCode::kStaleTape:
    case ErrorCode::kDiverged:
    case ErrorCode::kRuntime:
      return kExitRuntime;
  }
  return kExitRuntime;
}

namespace {

struct Flags {
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<int> parallelism;
  std::optional<std::uint64_t> seed;
};

std::string ReadText(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

void WriteText(const fs::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorCode::kIo, "cannot open " + path.string());
  out << text;
}

RunConfig LoadRunConfig(const Flags& flags) {
  json doc = json::object();
  if (!flags.config_path.empty()) {
    std::string text;
    try {
      text = ReadText(flags.config_path);
    } catch (const Error& e) {
      Fail(ErrorCode::kConfig, e.what());
    }
    doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) {
      Fail(ErrorCode::kConfig, "malformed JSON in " + flags.config_path);
    }
  }
  for (const std::string& assignment : flags.overrides) {
    ApplyOverride(doc, assignment);
  }
  if (flags.seed) doc["seed"] = *flags.seed;
  if (flags.parallelism) doc["parallelism"] = *flags.parallelism;
  return ParseRunConfig(doc);
}

fs::path OutputDir(const RunConfig& config, std::string_view command) {
  fs::path dir = fs::path(config.paths.output_dir) /
                 (std::string(command) + "-" + ConfigHash(config));
  fs::create_directories(dir);
  return dir;
}

const std::string& Require(const std::string& value, const char* key) {
  if (value.empty()) {
    Fail(ErrorCode::kConfig, std::string(key) + " is required");
  }
  return value;
}

FeatureStore LoadStore(const RunConfig& config) {
  if (config.paths.archives.empty()) {
    Fail(ErrorCode::kConfig, "paths.archives is required");
  }
  std::vector<fs::path> paths(config.paths.archives.begin(),
                              config.paths.archives.end());
  return FeatureStore::FromArchives(paths);
}

Dataset LoadDataset(const std::string& manifest_path,
                    const FeatureStore& store, const RunConfig& config,
                    const ModelConfig& model) {
  Manifest manifest = ParseManifest(manifest_path, &store);
  return Dataset::Build(manifest, store, config.proposals, model.Selection());
}

double ElapsedSeconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

// Wall-clock numbers stay out of the reproducible artifacts.
void WriteTiming(const fs::path& dir, double seconds) {
  WriteText(dir / "timing.log",
            json{{"elapsed_seconds", seconds}}.dump() + "\n");
}

std::string SentenceLabel(EmbeddingKind kind) {
  switch (kind) {
    case EmbeddingKind::kSentenceBert: return "BERT";
    case EmbeddingKind::kSentenceSkipthought: return "SkipThought";
    case EmbeddingKind::kSentenceRoberta: return "RoBERTa";
    case EmbeddingKind::kVoGlove: return "GloVe";
    case EmbeddingKind::kVoBert: return "BERT";
    default: return std::string(KindName(kind));
  }
}

std::string AblationRow(const std::string& name, const ModelConfig& model,
                        const EvalResult& result) {
  auto recall = [&](int n) {
    auto it = result.recall.find(n);
    if (it == result.recall.end()) return std::string("-");
    std::ostringstream s;
    s.setf(std::ios::fixed);
    s.precision(3);
    s << it->second;
    return s.str();
  };
  std::ostringstream out;
  out << "| Model | Sentence Embedding | VO Embedding | Object Segmentation "
         "Features | Video Captioning Features | R@1 | R@5 |\n"
      << "|---|---|---|---|---|---|---|\n"
      << "| " << name << " | " << SentenceLabel(model.sentence_kind) << " | "
      << SentenceLabel(model.vo_kind) << " | "
      << (model.use_object_features ? "\u2713" : "-") << " | "
      << (model.use_captioning_features ? "\u2713" : "-") << " | " << recall(1)
      << " | " << recall(5) << " |\n";
  return out.str();
}

int CmdSynth(const RunConfig& config, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  fs::path dir = OutputDir(config, "synth");
  SynthDataset synth = GenerateSynth(config.synth);
  SynthPaths paths = WriteSynth(synth, dir);
  EvalResult oracle = DecodingOracle(synth, synth.test_queries, synth.info,
                                     config.synth, config.proposals);
  EvalResult chance = RandomRankingOracle(synth.videos, synth.test_queries,
                                          config.proposals, config.seed);
  json report = {{"output_dir", dir.string()},
                 {"train_manifest", paths.train_manifest.string()},
                 {"test_manifest", paths.test_manifest.string()},
                 {"archive", paths.archive.string()},
                 {"train_queries", synth.train_queries.size()},
                 {"test_queries", synth.test_queries.size()},
                 {"decoding_oracle", EvalResultToJson(oracle, EvalSpec{})},
                 {"random_oracle", EvalResultToJson(chance, EvalSpec{})}};
  WriteText(dir / "synth_report.json", report.dump(2) + "\n");
  WriteTiming(dir, ElapsedSeconds(start));
  out << report.dump(2) << "\n";
  return kExitOk;
}

int CmdTrain(const RunConfig& config, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  FeatureStore store = LoadStore(config);
  Dataset dataset = LoadDataset(Require(config.paths.manifest, "paths.manifest"),
                                store, config, config.model);
  fs::path dir = OutputDir(config, "train");
  EvalSpec val_spec;
  val_spec.nms_threshold = config.eval.nms_threshold;
  TrainResult result =
      TrainWithHoldout(dataset, config.model, config.train, val_spec);
  SaveCheckpoint(result.best, config.model, dir / "model.mmlf");
  WriteText(dir / "metrics.jsonl", FormatMetricsLog(result.log));
  WriteText(dir / "config.json", ToJson(config).dump(2) + "\n");
  json summary = {{"output_dir", dir.string()},
                  {"checkpoint", (dir / "model.mmlf").string()},
                  {"best_epoch", result.best_epoch},
                  {"val_R@1", result.best_r1},
                  {"val_R@5", result.best_r5},
                  {"pairs", result.pair_count}};
  WriteText(dir / "summary.json", summary.dump(2) + "\n");
  WriteTiming(dir, ElapsedSeconds(start));
  out << summary.dump(2) << "\n";
  return kExitOk;
}

int CmdEval(const RunConfig& config, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  auto [params, model] =
      LoadCheckpoint(Require(config.paths.checkpoint, "paths.checkpoint"));
  FeatureStore store = LoadStore(config);
  const std::string& manifest = config.paths.test_manifest.empty()
                                    ? config.paths.manifest
                                    : config.paths.test_manifest;
  Dataset dataset = LoadDataset(Require(manifest, "paths.test_manifest"),
                                store, config, model);
  std::map<std::string, std::vector<PredictionRecord>> ranked;
  EvalResult result = EvaluateModel(params, model, dataset, config.eval, &ranked);

  fs::path dir = OutputDir(config, "eval");
  std::vector<PredictionLine> lines;
  for (const auto& [query_id, predictions] : ranked) {
    int rank = 1;
    for (const PredictionRecord& p : predictions) {
      lines.push_back({query_id, rank++, p.refined.start, p.refined.end,
                       p.weighted_score});
    }
  }
  WritePredictionFile(dir / "predictions.jsonl", lines);
  WriteText(dir / "eval.json",
            EvalResultToJson(result, config.eval).dump(2) + "\n");
  WriteTiming(dir, ElapsedSeconds(start));
  out << AblationRow(config.model_preset.empty() ? "custom"
                                                 : config.model_preset,
                     model, result);
  return kExitOk;
}

int CmdGrade(const RunConfig& config, std::ostream& out) {
  const std::string& manifest_path = config.paths.test_manifest.empty()
                                         ? config.paths.manifest
                                         : config.paths.test_manifest;
  Manifest manifest = ParseManifest(Require(manifest_path, "paths.manifest"));
  std::vector<PredictionLine> lines = ReadPredictionFile(
      Require(config.paths.predictions, "paths.predictions"));
  std::map<std::string, Interval> gts;
  for (const QueryRecord& q : manifest.queries) gts[q.query_id] = q.gt;
  EvalResult result = RecallAtN(GroupPredictions(lines), gts, config.eval);
  fs::path dir = OutputDir(config, "grade");
  WriteText(dir / "grade.json",
            EvalResultToJson(result, config.eval).dump(2) + "\n");
  out << FormatRecallTable(result, config.eval);
  return kExitOk;
}

int CmdSweep(const RunConfig& config, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  FeatureStore store = LoadStore(config);
  Dataset dataset = LoadDataset(Require(config.paths.manifest, "paths.manifest"),
                                store, config, config.model);
  fs::path dir = OutputDir(config, "sweep");
  SweepOptions options;
  options.parallelism = config.parallelism;
  options.checkpoint_dir = dir / "checkpoints";
  SweepResult result =
      RunSweep(config.sweep, dataset, config.model, config.train, options);
  const std::string table = FormatResultTable(result.rows);
  WriteText(dir / "results.jsonl", table);
  json summary = {{"output_dir", dir.string()},
                  {"results", (dir / "results.jsonl").string()},
                  {"configs", result.rows.size()}};
  if (result.winner) summary["winner"] = ToJson(*result.winner);
  WriteText(dir / "summary.json", summary.dump(2) + "\n");
  WriteTiming(dir, ElapsedSeconds(start));
  out << table << summary.dump(2) << "\n";
  return kExitOk;
}

int CmdPlot(const RunConfig& config, std::ostream& out) {
  std::vector<SweepRow> rows = ParseResultTable(
      ReadText(Require(config.paths.sweep_results, "paths.sweep_results")));
  fs::path dir = OutputDir(config, "plot");
  for (const fs::path& path : EmitCurves(rows, dir)) {
    out << path.string() << "\n";
  }
  return kExitOk;
}

// Collects every violation instead of stopping at the first.
class ValidationReport {
 public:
  void Add(std::string location, std::string message) {
    lines_.push_back(location + ": " + message);
  }
  bool clean() const { return lines_.empty(); }
  void Print(std::ostream& out) const {
    for (const std::string& line : lines_) out << "violation " << line << "\n";
    out << (clean() ? std::string("clean")
                    : std::to_string(lines_.size()) + " violation(s)")
        << "\n";
  }

 private:
  std::vector<std::string> lines_;
};

constexpr double kClassSumTolerance = 1e-4;

void CheckRef(const FeatureStore& store, const EmbeddingDims& dims,
              EmbeddingKind kind, const std::string& key, bool timeline,
              const std::string& location, std::set<std::string>& checked,
              ValidationReport& report) {
  if (!store.Contains(key)) {
    report.Add(location, "dangling archive key '" + key + "' (" +
                             std::string(KindName(kind)) + ")");
    return;
  }
  if (!checked.insert(key).second) return;
  const TensorRecord& record = store.Get(key);
  try {
    if (timeline) {
      CheckTimeline(record, kind, dims.Get(kind));
    } else {
      CheckVector(record, kind, dims.Get(kind));
    }
  } catch (const Error& e) {
    report.Add(location, e.what());
    return;
  }
  if (kind == EmbeddingKind::kObjectSegmentation) {
    const std::size_t width = record.shape.back();
    for (std::size_t row = 0; row * width < record.data.size(); ++row) {
      double sum = 0.0;
      for (std::size_t c = 0; c < width; ++c) {
        sum += record.data[row * width + c];
      }
      if (std::abs(sum - 1.0) > kClassSumTolerance) {
        report.Add(location, "object row " + std::to_string(row) + " of '" +
                                 key + "' sums to " + std::to_string(sum));
        break;
      }
    }
  }
}

int CmdValidate(const RunConfig& config, std::ostream& out) {
  ValidationReport report;
  FeatureStore store;
  for (const std::string& path : config.paths.archives) {
    try {
      for (TensorRecord& record : ReadArchive(path)) {
        try {
          store.Add(std::move(record));
        } catch (const Error& e) {
          report.Add(path, e.what());
        }
      }
    } catch (const Error& e) {
      report.Add(path, e.what());
    }
  }

  std::vector<std::string> manifests;
  if (!config.paths.manifest.empty()) manifests.push_back(config.paths.manifest);
  if (!config.paths.test_manifest.empty()) {
    manifests.push_back(config.paths.test_manifest);
  }
  if (manifests.empty() && config.paths.archives.empty()) {
    Fail(ErrorCode::kConfig, "nothing to validate: set paths.manifest or "
                             "paths.archives");
  }
  std::set<std::string> checked;
  for (const std::string& path : manifests) {
    Manifest manifest;
    try {
      manifest = ParseManifest(path);
    } catch (const Error& e) {
      report.Add(path, e.what());
      continue;
    }
    for (const VideoMeta& video : manifest.videos) {
      const std::string location = path + ": video '" + video.video_id + "'";
      for (const auto& [kind, key] : video.clip_feature_refs) {
        CheckRef(store, config.dims, kind, key, true, location, checked,
                 report);
      }
    }
    for (const QueryRecord& query : manifest.queries) {
      const std::string location = path + ": query '" + query.query_id + "'";
      for (const auto& [kind, key] : query.embedding_refs) {
        CheckRef(store, config.dims, kind, key, false, location, checked,
                 report);
      }
    }
  }
  report.Print(out);
  return report.clean() ? kExitOk : kExitData;
}

void RouteLogsTo(std::ostream& err) {
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
  auto logger = std::make_shared<spdlog::logger>("mml", sink);
  logger->set_pattern("[%l] %v");
  spdlog::set_default_logger(logger);
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  RouteLogsTo(err);
  CLI::App app{"Temporal moment localization with multi-faceted features",
               "mml"};
  app.require_subcommand(1);
  app.fallthrough();
  Flags flags;
  std::uint64_t seed = 0;
  int parallelism = 1;
  app.add_option("--config", flags.config_path, "Run-config JSON file");
  app.add_option("--set", flags.overrides, "Override, key=value (repeatable)")
      ->allow_extra_args(false);
  auto* seed_opt = app.add_option("--seed", seed, "Global seed");
  auto* par_opt = app.add_option("--parallelism", parallelism, "Worker count")
                      ->check(CLI::PositiveNumber);

  using Command = int (*)(const RunConfig&, std::ostream&);
  const std::vector<std::pair<std::string, std::pair<std::string, Command>>>
      commands = {
          {"synth", {"Generate a synthetic dataset", CmdSynth}},
          {"train", {"Train one model", CmdTrain}},
          {"eval", {"Evaluate a checkpoint", CmdEval}},
          {"sweep", {"Grid sweep over s_obj, d_obj, d_vac", CmdSweep}},
          {"grade", {"Grade a prediction file", CmdGrade}},
          {"validate", {"Check manifests and archives", CmdValidate}},
          {"plot", {"Emit plot data from a sweep result table", CmdPlot}},
      };
  for (const auto& [name, entry] : commands) {
    app.add_subcommand(name, entry.first);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  if (seed_opt->count() > 0) flags.seed = seed;
  if (par_opt->count() > 0) flags.parallelism = parallelism;

  try {
    RunConfig config = LoadRunConfig(flags);
    for (const auto& [name, entry] : commands) {
      if (app.got_subcommand(name)) return entry.second(config, out);
    }
    return kExitConfig;
  } catch (const Error& e) {
    err << "error (" << ErrorCodeName(e.code()) << "): " << e.what() << "\n";
    return ExitClassFor(e.code());
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error (io): " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace mml::tools
