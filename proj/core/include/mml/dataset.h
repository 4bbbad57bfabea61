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

// Resolves manifest references into per-clip and per-query feature
// vectors. Visual timelines are pooled over the rows a clip covers:
// object_segmentation by max, every other visual kind by mean.

#ifndef MML_DATASET_H_
#define MML_DATASET_H_

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "mml/archive.h"
#include "mml/embedding.h"
#include "mml/manifest.h"
#include "mml/proposals.h"

namespace mml {

// Unpooled clip features; empty vectors mean "not loaded".
struct ClipFeatures {
  std::vector<double> fc6;
  std::vector<double> captioning;
  std::vector<double> object;  // max-pooled class means, before scaling
  std::vector<double> vac;
  double actionness = 1.0;
};

struct QueryFeatures {
  std::vector<double> sentence;
  std::vector<double> vo;
};

// Which features a model consumes.
struct FeatureSelection {
  EmbeddingKind sentence_kind = EmbeddingKind::kSentenceBert;
  EmbeddingKind vo_kind = EmbeddingKind::kVoGlove;
  bool use_object = true;
  bool use_captioning = false;
  EmbeddingDims dims;
};

// Half-open row range [begin, end) of a timeline.
struct RowRange {
  std::size_t begin = 0;
  std::size_t end = 0;
};

// Rows whose sample time (row * kFrameSampleStride / frame_rate) falls in
// [bounds.start, bounds.end). A clip covering no sample time maps to the
// single row nearest its start.
RowRange ClipRows(const Interval& bounds, double frame_rate,
                  std::size_t row_count);

// Checks the tensor is [rows, dim] with the expected dim.
void CheckTimeline(const TensorRecord& record, EmbeddingKind kind,
                   std::size_t dim);
// Checks the tensor holds exactly `dim` values ([dim] or [1, dim]).
void CheckVector(const TensorRecord& record, EmbeddingKind kind,
                 std::size_t dim);

struct VideoEntry {
  VideoMeta meta;
  std::vector<ClipCandidate> clips;
  std::vector<ClipFeatures> features;  // parallel to clips
};

struct QueryEntry {
  QueryRecord record;
  QueryFeatures features;
  std::size_t video = 0;  // index into Dataset::videos()
};

class Dataset {
 public:
  static Dataset Build(const Manifest& manifest, const FeatureStore& store,
                       const ProposalConfig& proposals,
                       const FeatureSelection& selection);

  const std::vector<VideoEntry>& videos() const { return *videos_; }
  const std::vector<QueryEntry>& queries() const { return queries_; }
  const FeatureSelection& selection() const { return selection_; }

  // Subset sharing this dataset's videos.
  Dataset WithQueries(std::vector<QueryEntry> queries) const;

 private:
  std::shared_ptr<const std::vector<VideoEntry>> videos_ =
      std::make_shared<std::vector<VideoEntry>>();
  std::vector<QueryEntry> queries_;
  FeatureSelection selection_;
};

}  // namespace mml

#endif  // MML_DATASET_H_
