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

#ifndef MML_EVALUATION_H_
#define MML_EVALUATION_H_

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mml/dataset.h"
#include "mml/interval.h"
#include "mml/network.h"

namespace mml {

struct EvalSpec {
  std::vector<int> n_values = {1, 5};
  double iou_threshold = 0.5;
  double nms_threshold = 1.0;  // 1.0 disables suppression

  void Validate() const;
};

// Reference numbers of the published ablation on Charades-STA. These are
// documentation constants; nothing in this repository reproduces them.
struct ReferenceRecall {
  const char* model;
  double r1;
  double r5;
};
inline constexpr ReferenceRecall kMacAuthorsBaseline = {"MAC (authors)", 0.304,
                                                        0.648};
inline constexpr ReferenceRecall kMacPytorchBaseline = {"MAC (PyTorch)", 0.297,
                                                        0.641};
inline constexpr ReferenceRecall kModel3Reference = {"Model 3", 0.313, 0.659};
inline constexpr ReferenceRecall kModel7Reference = {"Model 7", 0.319, 0.651};

struct EvalResult {
  std::map<int, double> recall;
  std::size_t n_queries = 0;
  // query_id -> n -> 0/1
  std::map<std::string, std::map<int, int>> per_query_hits;
};

// |a ∩ b| / |a ∪ b|; 0 when disjoint or when the union has zero length.
double TemporalIou(const Interval& a, const Interval& b);

// query_id -> predictions, best first.
using RankedIntervals = std::map<std::string, std::vector<Interval>>;

// R@n at IoU >= u over every query in `gts`. Throws kNotFound naming a
// query that has no predictions.
EvalResult RecallAtN(const RankedIntervals& predictions,
                     const std::map<std::string, Interval>& gts,
                     const EvalSpec& spec);

// Greedy suppression over refined intervals; input sorted best first.
// threshold >= 1.0 returns the input unchanged.
std::vector<PredictionRecord> Nms(std::span<const PredictionRecord> ranked,
                                  double threshold);

// Scores every query of `dataset` against its video's candidates, applies
// NMS and grades the result. `ranked_out`, when given, receives the final
// ranked lists.
EvalResult EvaluateModel(
    const NetworkParams& params, const ModelConfig& config,
    const Dataset& dataset, const EvalSpec& spec,
    std::map<std::string, std::vector<PredictionRecord>>* ranked_out =
        nullptr);

// Prediction file: one JSON object per line with
// query_id, rank (1-based), start_sec, end_sec, score.
struct PredictionLine {
  std::string query_id;
  int rank = 0;
  double start_sec = 0.0;
  double end_sec = 0.0;
  double score = 0.0;
};

std::vector<PredictionLine> ReadPredictionFile(
    const std::filesystem::path& path);
void WritePredictionFile(const std::filesystem::path& path,
                         std::span<const PredictionLine> lines);
RankedIntervals GroupPredictions(std::span<const PredictionLine> lines);

nlohmann::json EvalResultToJson(const EvalResult& result, const EvalSpec& spec);
// Plain-text table, one row per n.
std::string FormatRecallTable(const EvalResult& result, const EvalSpec& spec);

}  // namespace mml

#endif  // MML_EVALUATION_H_
