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

#include "mml/evaluation.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "mml/status.h"

namespace mml {

void EvalSpec::Validate() const {
  if (n_values.empty()) {
    Fail(ErrorCode::kInvalidArgument, "n_values must be non-empty");
  }
  for (int n : n_values) {
    if (n < 1) Fail(ErrorCode::kInvalidArgument, "n values must be >= 1");
  }
  if (!(iou_threshold > 0.0 && iou_threshold <= 1.0)) {
    Fail(ErrorCode::kInvalidArgument, "iou_threshold must lie in (0, 1]");
  }
  if (!(nms_threshold > 0.0 && nms_threshold <= 1.0)) {
    Fail(ErrorCode::kInvalidArgument, "nms_threshold must lie in (0, 1]");
  }
}

double TemporalIou(const Interval& a, const Interval& b) {
  ValidateInterval(a, "temporal IoU");
  ValidateInterval(b, "temporal IoU");
  const double inter =
      std::max(0.0, std::min(a.end, b.end) - std::max(a.start, b.start));
  const double uni = a.length() + b.length() - inter;
  if (uni <= 0.0) return 0.0;
  return inter / uni;
}

EvalResult RecallAtN(const RankedIntervals& predictions,
                     const std::map<std::string, Interval>& gts,
                     const EvalSpec& spec) {
  spec.Validate();
  EvalResult result;
  result.n_queries = gts.size();
  std::map<int, std::size_t> hits;
  for (int n : spec.n_values) hits[n] = 0;

  for (const auto& [query_id, gt] : gts) {
    auto it = predictions.find(query_id);
    if (it == predictions.end() || it->second.empty()) {
      Fail(ErrorCode::kNotFound,
           "no predictions for query '" + query_id + "'");
    }
    const std::vector<Interval>& ranked = it->second;
    // Rank of the first prediction reaching the threshold.
    std::size_t first_hit = std::numeric_limits<std::size_t>::max();
    for (std::size_t r = 0; r < ranked.size(); ++r) {
      if (TemporalIou(ranked[r], gt) >= spec.iou_threshold) {
        first_hit = r;
        break;
      }
    }
    auto& query_hits = result.per_query_hits[query_id];
    for (int n : spec.n_values) {
      const int hit = first_hit < static_cast<std::size_t>(n) ? 1 : 0;
      query_hits[n] = hit;
      hits[n] += static_cast<std::size_t>(hit);
    }
  }
  for (const auto& [n, count] : hits) {
    result.recall[n] = result.n_queries == 0
                           ? 0.0
                           : static_cast<double>(count) /
                                 static_cast<double>(result.n_queries);
  }
  return result;
}

std::vector<PredictionRecord> Nms(std::span<const PredictionRecord> ranked,
                                  double threshold) {
  if (threshold >= 1.0) return {ranked.begin(), ranked.end()};
  std::vector<PredictionRecord> kept;
  for (const PredictionRecord& candidate : ranked) {
    bool keep = true;
    for (const PredictionRecord& k : kept) {
      if (TemporalIou(candidate.refined, k.refined) >= threshold) {
        keep = false;
        break;
      }
    }
    if (keep) kept.push_back(candidate);
  }
  return kept;
}

EvalResult EvaluateModel(
    const NetworkParams& params, const ModelConfig& config,
    const Dataset& dataset, const EvalSpec& spec,
    std::map<std::string, std::vector<PredictionRecord>>* ranked_out) {
  spec.Validate();
  RankedIntervals intervals;
  std::map<std::string, Interval> gts;
  for (const QueryEntry& query : dataset.queries()) {
    const VideoEntry& video = dataset.videos()[query.video];
    std::vector<PredictionRecord> ranked =
        Nms(ScoreCandidates(params, config, video, query.features),
            spec.nms_threshold);
    auto& list = intervals[query.record.query_id];
    list.reserve(ranked.size());
    for (const PredictionRecord& p : ranked) list.push_back(p.refined);
    gts[query.record.query_id] = query.record.gt;
    if (ranked_out) (*ranked_out)[query.record.query_id] = std::move(ranked);
  }
  return RecallAtN(intervals, gts, spec);
}

std::vector<PredictionLine> ReadPredictionFile(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIo, "cannot open " + path.string());
  std::vector<PredictionLine> lines;
  std::string text;
  std::size_t line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto obj = nlohmann::json::parse(text, nullptr, false);
    auto bad = [&](const std::string& what) {
      Fail(ErrorCode::kParse, path.string() + " line " +
                                  std::to_string(line_no) + ": " + what);
    };
    if (obj.is_discarded() || !obj.is_object()) bad("malformed record");
    try {
      PredictionLine line{obj.at("query_id").get<std::string>(),
                          obj.at("rank").get<int>(),
                          obj.at("start_sec").get<double>(),
                          obj.at("end_sec").get<double>(),
                          obj.value("score", 0.0)};
      if (!IsValid({line.start_sec, line.end_sec})) bad("invalid interval");
      lines.push_back(std::move(line));
    } catch (const nlohmann::json::exception& e) {
      bad(e.what());
    }
  }
  return lines;
}

void WritePredictionFile(const std::filesystem::path& path,
                         std::span<const PredictionLine> lines) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorCode::kIo, "cannot open " + path.string());
  for (const PredictionLine& line : lines) {
    nlohmann::json obj = {{"query_id", line.query_id},
                          {"rank", line.rank},
                          {"start_sec", line.start_sec},
                          {"end_sec", line.end_sec},
                          {"score", line.score}};
    out << obj.dump() << '\n';
  }
}

RankedIntervals GroupPredictions(std::span<const PredictionLine> lines) {
  std::map<std::string, std::vector<const PredictionLine*>> grouped;
  for (const PredictionLine& line : lines) {
    grouped[line.query_id].push_back(&line);
  }
  RankedIntervals ranked;
  for (auto& [query_id, group] : grouped) {
    std::stable_sort(group.begin(), group.end(),
                     [](const PredictionLine* a, const PredictionLine* b) {
                       return a->rank < b->rank;
                     });
    auto& list = ranked[query_id];
    for (const PredictionLine* line : group) {
      list.push_back({line->start_sec, line->end_sec});
    }
  }
  return ranked;
}

nlohmann::json EvalResultToJson(const EvalResult& result,
                                const EvalSpec& spec) {
  nlohmann::json recall = nlohmann::json::object();
  for (const auto& [n, value] : result.recall) {
    recall["R@" + std::to_string(n)] = value;
  }
  return {{"iou_threshold", spec.iou_threshold},
          {"nms_threshold", spec.nms_threshold},
          {"n_queries", result.n_queries},
          {"recall", recall}};
}

std::string FormatRecallTable(const EvalResult& result,
                              const EvalSpec& spec) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(3);
  out << "queries: " << result.n_queries << "  IoU >= " << spec.iou_threshold
      << "\n";
  for (const auto& [n, value] : result.recall) {
    out << "R@" << n << "  " << value << "\n";
  }
  return out.str();
}

}  // namespace mml
