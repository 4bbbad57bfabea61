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

// Synthetic moment-localization data with planted, recoverable signals.
//
// Each video hosts several queries with distinct verbs and objects and
// non-overlapping ground-truth intervals. Frames sampled inside a query's
// interval carry:
//   object_segmentation: class mass min(1, signal_strength) on the class
//     of the query's object (class 0 is background);
//   c3d_fc6 / visual_activity_concepts / video_captioning: +signal_strength
//     on the channel of the query's verb;
// for every kind listed in signal_kinds. Background noise is Gaussian with
// standard deviation noise_sigma, or dense_noise_sigma for the real-valued
// kinds when set (for class distributions, |N(0, sigma)|
// mass spread over the classes before renormalization). Sentence vectors
// are seeded codes per (verb, object); VO vectors are the sum of per-word
// codes.

#ifndef MML_SYNTH_H_
#define MML_SYNTH_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mml/archive.h"
#include "mml/embedding.h"
#include "mml/evaluation.h"
#include "mml/manifest.h"
#include "mml/proposals.h"

namespace mml {

struct SynthConfig {
  int n_videos = 50;
  int n_queries = 200;
  double min_duration = 40.0;
  double max_duration = 60.0;
  double frame_rate = 30.0;
  double min_gt_length = 5.5;
  double max_gt_length = 8.5;
  int n_verbs = 8;
  int n_objects = 12;
  double signal_strength = 1.0;
  double noise_sigma = 0.1;
  // Noise of the real-valued kinds (fc6, vac, captioning); defaults to
  // noise_sigma.
  std::optional<double> dense_noise_sigma;
  std::set<EmbeddingKind> signal_kinds = {
      EmbeddingKind::kObjectSegmentation,
      EmbeddingKind::kVisualActivityConcepts, EmbeddingKind::kC3dFc6};
  // Queries of the last ceil(test_fraction * n_videos) videos form the
  // test manifest.
  double test_fraction = 0.2;
  EmbeddingKind sentence_kind = EmbeddingKind::kSentenceBert;
  EmbeddingKind vo_kind = EmbeddingKind::kVoGlove;
  EmbeddingDims dims = DefaultSynthDims();
  // When > 0 object vectors are class means of raw side x side pixel maps.
  int raw_map_side = 0;
  bool emit_actionness = false;
  std::uint64_t seed = 0;

  // Desk-scale widths: c3d_fc6 64, visual_activity_concepts 32,
  // video_captioning 64; sentence and VO kinds keep their defaults.
  static EmbeddingDims DefaultSynthDims();
  void Validate() const;
};

// Ground truth of the planted signal for one query.
struct SynthQueryInfo {
  std::string query_id;
  std::string video_id;
  int verb = 0;
  int object = 0;
};

struct SynthDataset {
  std::vector<VideoMeta> videos;
  std::vector<QueryRecord> train_queries;
  std::vector<QueryRecord> test_queries;
  std::vector<SynthQueryInfo> info;  // every query, train then test
  std::vector<TensorRecord> records;
};

SynthDataset GenerateSynth(const SynthConfig& config);

struct SynthPaths {
  std::filesystem::path train_manifest;
  std::filesystem::path test_manifest;
  std::filesystem::path archive;
};

// Writes train.jsonl, test.jsonl and features.mmlf into `dir`.
SynthPaths WriteSynth(const SynthDataset& dataset,
                      const std::filesystem::path& dir);

// Decoding oracle: for each query, scores every candidate clip by
// sum over covered rows of (a_t - max_t(a) / 2), where a_t is the query's
// planted channel on the first signal kind (object channel preferred), and
// ranks by that score. Bounds what a trained model can reach.
EvalResult DecodingOracle(const SynthDataset& dataset,
                          const std::vector<QueryRecord>& queries,
                          const std::vector<SynthQueryInfo>& info,
                          const SynthConfig& config,
                          const ProposalConfig& proposals);

// Ranks each query's candidates in a seeded random order.
EvalResult RandomRankingOracle(const std::vector<VideoMeta>& videos,
                               const std::vector<QueryRecord>& queries,
                               const ProposalConfig& proposals,
                               std::uint64_t seed);

}  // namespace mml

#endif  // MML_SYNTH_H_
