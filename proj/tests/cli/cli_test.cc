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

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "mml/archive.h"
#include "mml/evaluation.h"
#include "mml/manifest.h"
#include "mml/sweep.h"
#include "support/fixtures.h"
#include "tools/cli.h"

namespace mml::tools {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

Outcome Invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  Outcome o;
  o.code = RunCli(args, out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

std::string Slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::string Set(const std::string& key, const std::string& value) {
  return key + "=" + value;
}

std::string Archives(const fs::path& path) {
  return json::array({path.string()}).dump();
}

const char* const kSynthDims =
    R"({"c3d_fc6": 64, "visual_activity_concepts": 32, "video_captioning": 64})";

class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    root_ = new fs::path(mml::testing::ScratchDir("cli"));
    Outcome o = Invoke({"synth", "--seed", "5", "--set",
                     Set("paths.output_dir", (*root_ / "data").string()),
                     "--set", "synth.n_videos=8", "--set", "synth.n_queries=32"});
    ASSERT_EQ(o.code, 0) << o.err;
    json report = json::parse(o.out);
    train_ = new fs::path(report.at("train_manifest").get<std::string>());
    test_ = new fs::path(report.at("test_manifest").get<std::string>());
    archive_ = new fs::path(report.at("archive").get<std::string>());
  }
  static void TearDownTestSuite() {
    delete root_;
    delete train_;
    delete test_;
    delete archive_;
  }

  static std::vector<std::string> DataArgs(const fs::path& manifest,
                                           const fs::path& archive,
                                           const fs::path& out_dir) {
    return {"--set", Set("paths.manifest", manifest.string()),
            "--set", Set("paths.archives", Archives(archive)),
            "--set", Set("paths.output_dir", out_dir.string()),
            "--set", Set("dims", kSynthDims)};
  }

  static Outcome Validate(const fs::path& manifest, const fs::path& archive) {
    std::vector<std::string> args = {"validate"};
    for (auto& a : DataArgs(manifest, archive, *root_ / "validate")) {
      args.push_back(a);
    }
    return Invoke(args);
  }

  static std::vector<TensorRecord> Records() { return ReadArchive(*archive_); }

  static fs::path* root_;
  static fs::path* train_;
  static fs::path* test_;
  static fs::path* archive_;
};

fs::path* CliTest::root_ = nullptr;
fs::path* CliTest::train_ = nullptr;
fs::path* CliTest::test_ = nullptr;
fs::path* CliTest::archive_ = nullptr;

TEST(ExitClassTest, Table) {
  EXPECT_EQ(ExitClassFor(ErrorCode::kConfig), kExitConfig);
  EXPECT_EQ(ExitClassFor(ErrorCode::kInvalidArgument), kExitConfig);
  EXPECT_EQ(ExitClassFor(ErrorCode::kTruncated), kExitData);
  EXPECT_EQ(ExitClassFor(ErrorCode::kDimMismatch), kExitData);
  EXPECT_EQ(ExitClassFor(ErrorCode::kDanglingKey), kExitData);
  EXPECT_EQ(ExitClassFor(ErrorCode::kNotFound), kExitData);
  EXPECT_EQ(ExitClassFor(ErrorCode::kDiverged), kExitRuntime);
  EXPECT_EQ(ExitClassFor(ErrorCode::kStaleTape), kExitRuntime);
}

TEST(CliArgsTest, UsageErrorsExitTwo) {
  EXPECT_EQ(Invoke({}).code, kExitConfig);
  EXPECT_EQ(Invoke({"frobnicate"}).code, kExitConfig);
  EXPECT_EQ(Invoke({"train", "--parallelism", "0"}).code, kExitConfig);
  Outcome unknown = Invoke({"train", "--set", "train.epoch=3"});
  EXPECT_EQ(unknown.code, kExitConfig);
  EXPECT_NE(unknown.err.find("train.epoch"), std::string::npos);
  EXPECT_EQ(Invoke({"train", "--set", "model.seed=4"}).code, kExitConfig);
  EXPECT_EQ(Invoke({"train", "--config", "/nonexistent/run.json"}).code, kExitConfig);
  EXPECT_EQ(Invoke({"train"}).code, kExitConfig);
  EXPECT_EQ(Invoke({"--help"}).code, kExitOk);
}

TEST_F(CliTest, SynthOutputValidatesClean) {
  Outcome o = Validate(*train_, *archive_);
  EXPECT_EQ(o.code, kExitOk) << o.out << o.err;
  EXPECT_NE(o.out.find("clean"), std::string::npos);
  EXPECT_EQ(Validate(*test_, *archive_).code, kExitOk);
}

TEST_F(CliTest, ValidateReportsTruncation) {
  const fs::path bad = *root_ / "truncated.mmlf";
  std::string bytes = Slurp(*archive_);
  std::ofstream(bad, std::ios::binary) << bytes.substr(0, bytes.size() - 7);
  Outcome o = Validate(*train_, bad);
  EXPECT_EQ(o.code, kExitData);
  EXPECT_NE(o.out.find("truncation at record"), std::string::npos) << o.out;
}

TEST_F(CliTest, ValidateReportsSentenceWidth) {
  std::vector<TensorRecord> records = Records();
  std::string key;
  for (TensorRecord& r : records) {
    if (r.key.rfind("sent/", 0) == 0) {
      key = r.key;
      r.shape = {700};
      r.data.assign(700, 0.5f);
      break;
    }
  }
  ASSERT_FALSE(key.empty());
  const fs::path bad = *root_ / "narrow.mmlf";
  WriteArchive(records, bad);
  Outcome o = Validate(*train_, bad);
  EXPECT_EQ(o.code, kExitData);
  EXPECT_NE(o.out.find("has 700 values, expected 768"), std::string::npos) << o.out;
  EXPECT_NE(o.out.find(key), std::string::npos);
}

TEST_F(CliTest, ValidateReportsDanglingKeys) {
  std::vector<TensorRecord> records = Records();
  std::string removed;
  for (auto it = records.begin(); it != records.end(); ++it) {
    if (it->key.find("/object_segmentation") != std::string::npos) {
      removed = it->key;
      records.erase(it);
      break;
    }
  }
  ASSERT_FALSE(removed.empty());
  const fs::path bad = *root_ / "dangling.mmlf";
  WriteArchive(records, bad);
  Outcome o = Validate(*train_, bad);
  EXPECT_EQ(o.code, kExitData);
  EXPECT_NE(o.out.find("dangling archive key '" + removed + "'"), std::string::npos)
      << o.out;
}

TEST_F(CliTest, GradeGroundTruthPredictionsIsPerfect) {
  Manifest manifest = ParseManifest(*test_);
  std::vector<PredictionLine> lines;
  for (const QueryRecord& q : manifest.queries) {
    lines.push_back({q.query_id, 1, q.gt.start, q.gt.end, 1.0});
  }
  const fs::path preds = *root_ / "gt_predictions.jsonl";
  WritePredictionFile(preds, lines);
  Outcome o = Invoke({"grade", "--set", Set("paths.test_manifest", test_->string()),
                   "--set", Set("paths.predictions", preds.string()),
                   "--set", Set("paths.output_dir", (*root_ / "grade").string())});
  EXPECT_EQ(o.code, kExitOk) << o.err;
  EXPECT_NE(o.out.find("R@1  1.000"), std::string::npos) << o.out;
  EXPECT_NE(o.out.find("R@5  1.000"), std::string::npos) << o.out;

  const std::string missing = lines.back().query_id;
  lines.pop_back();
  WritePredictionFile(preds, lines);
  Outcome partial = Invoke({"grade", "--set", Set("paths.test_manifest", test_->string()),
                         "--set", Set("paths.predictions", preds.string()),
                         "--set", Set("paths.output_dir", (*root_ / "grade").string())});
  EXPECT_EQ(partial.code, kExitData);
  EXPECT_NE(partial.err.find("'" + missing + "'"), std::string::npos) << partial.err;
}

std::vector<std::string> TrainArgs(std::vector<std::string> base) {
  std::vector<std::string> extra = {"--set", "model.preset=model3",
                                    "--set", "model.common_dim=16",
                                    "--set", "model.hidden_dim=16",
                                    "--set", "train.optimizer=adam",
                                    "--set", "train.epochs=2",
                                    "--seed", "11"};
  base.insert(base.end(), extra.begin(), extra.end());
  return base;
}

TEST_F(CliTest, TrainTwiceIsByteIdenticalAndEvalPrintsARow) {
  std::vector<std::string> a = {"train"};
  for (auto& s : DataArgs(*train_, *archive_, *root_ / "train_a")) a.push_back(s);
  std::vector<std::string> b = {"train"};
  for (auto& s : DataArgs(*train_, *archive_, *root_ / "train_b")) b.push_back(s);
  Outcome first = Invoke(TrainArgs(a));
  Outcome second = Invoke(TrainArgs(b));
  ASSERT_EQ(first.code, kExitOk) << first.err;
  ASSERT_EQ(second.code, kExitOk) << second.err;
  const fs::path dir_a = json::parse(first.out).at("output_dir").get<std::string>();
  const fs::path dir_b = json::parse(second.out).at("output_dir").get<std::string>();
  EXPECT_EQ(dir_a.filename(), dir_b.filename());
  for (const char* name : {"model.mmlf", "model.mmlf.json", "metrics.jsonl"}) {
    const std::string bytes = Slurp(dir_a / name);
    EXPECT_FALSE(bytes.empty()) << name;
    EXPECT_EQ(bytes, Slurp(dir_b / name)) << name;
  }

  std::vector<std::string> eval = {"eval"};
  for (auto& s : DataArgs(*train_, *archive_, *root_ / "eval")) eval.push_back(s);
  eval.insert(eval.end(), {"--set", Set("paths.test_manifest", test_->string()),
                           "--set", Set("paths.checkpoint", (dir_a / "model.mmlf").string()),
                           "--set", "model.preset=model3"});
  Outcome row = Invoke(eval);
  ASSERT_EQ(row.code, kExitOk) << row.err;
  EXPECT_NE(row.out.find("| Model | Sentence Embedding | VO Embedding |"), std::string::npos);
  EXPECT_NE(row.out.find("| model3 | BERT | GloVe | ✓ | - |"), std::string::npos)
      << row.out;
}

TEST_F(CliTest, SweepThenPlot) {
  std::vector<std::string> args = {"sweep"};
  for (auto& s : DataArgs(*train_, *archive_, *root_ / "sweep")) args.push_back(s);
  args = TrainArgs(args);
  args.insert(args.end(), {"--set", "train.epochs=1", "--set", "sweep.s_obj_values=[0, 0.005]",
                           "--set", "sweep.d_obj_values=[0.5]", "--set", "sweep.d_vac_values=[0]",
                           "--parallelism", "2"});
  Outcome sweep = Invoke(args);
  ASSERT_EQ(sweep.code, kExitOk) << sweep.err;
  std::string table_path;
  for (const auto& entry : fs::recursive_directory_iterator(*root_ / "sweep")) {
    if (entry.path().filename() == "results.jsonl") table_path = entry.path().string();
  }
  ASSERT_FALSE(table_path.empty());
  EXPECT_EQ(ParseResultTable(Slurp(table_path)).size(), 2u);

  Outcome plot = Invoke({"plot", "--set", Set("paths.sweep_results", table_path),
                      "--set", Set("paths.output_dir", (*root_ / "plot").string())});
  ASSERT_EQ(plot.code, kExitOk) << plot.err;
  EXPECT_NE(plot.out.find("curve_r1_dobj_0.5.tsv"), std::string::npos) << plot.out;
  EXPECT_NE(plot.out.find("curve_r5_dobj_0.5.tsv"), std::string::npos);
}

}  // namespace
}  // namespace mml::tools
