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

#include "mml/dataset.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "mml/features.h"
#include "mml/status.h"

namespace mml {
namespace {

std::string KindLabel(EmbeddingKind kind) { return std::string(KindName(kind)); }

std::vector<std::vector<double>> Rows(const TensorRecord& record,
                                      RowRange range) {
  const std::size_t dim = record.shape.back();
  std::vector<std::vector<double>> rows;
  rows.reserve(range.end - range.begin);
  for (std::size_t r = range.begin; r < range.end; ++r) {
    rows.emplace_back(record.data.begin() + r * dim,
                      record.data.begin() + (r + 1) * dim);
  }
  return rows;
}

const TensorRecord& Timeline(const VideoMeta& video, const FeatureStore& store,
                             EmbeddingKind kind, std::size_t dim) {
  auto it = video.clip_feature_refs.find(kind);
  if (it == video.clip_feature_refs.end()) {
    Fail(ErrorCode::kNotFound, "video '" + video.video_id +
                                   "' is missing feature '" + KindLabel(kind) +
                                   "'");
  }
  const TensorRecord& record = store.Get(it->second);
  CheckTimeline(record, kind, dim);
  return record;
}

std::vector<double> QueryVector(const QueryRecord& query,
                                const FeatureStore& store, EmbeddingKind kind,
                                std::size_t dim) {
  auto it = query.embedding_refs.find(kind);
  if (it == query.embedding_refs.end()) {
    Fail(ErrorCode::kNotFound, "query '" + query.query_id +
                                   "' is missing feature '" + KindLabel(kind) +
                                   "'");
  }
  const TensorRecord& record = store.Get(it->second);
  CheckVector(record, kind, dim);
  return record.ToDouble();
}

}  // namespace

RowRange ClipRows(const Interval& bounds, double frame_rate,
                  std::size_t row_count) {
  if (row_count == 0) Fail(ErrorCode::kInvalidArgument, "empty timeline");
  const double row_seconds =
      static_cast<double>(kFrameSampleStride) / frame_rate;
  // First row with time >= start, first row with time >= end.
  auto first_at_or_after = [&](double t) {
    double r = std::ceil(t / row_seconds - 1e-9);
    return static_cast<std::size_t>(
        std::clamp(r, 0.0, static_cast<double>(row_count)));
  };
  RowRange range{first_at_or_after(bounds.start),
                 first_at_or_after(bounds.end)};
  if (range.end <= range.begin) {
    std::size_t nearest = static_cast<std::size_t>(std::min(
        std::floor(bounds.start / row_seconds + 0.5),
        static_cast<double>(row_count - 1)));
    range = {nearest, nearest + 1};
  }
  return range;
}

void CheckTimeline(const TensorRecord& record, EmbeddingKind kind,
                   std::size_t dim) {
  bool ok = false;
  if (kind == EmbeddingKind::kActionness) {
    ok = record.shape.size() == 1 ||
         (record.shape.size() == 2 && record.shape[1] == 1);
  } else {
    ok = record.shape.size() == 2 && record.shape[1] == dim;
  }
  if (!ok) {
    std::string shape;
    for (std::uint32_t d : record.shape) {
      shape += (shape.empty() ? "" : ",") + std::to_string(d);
    }
    Fail(ErrorCode::kDimMismatch,
         "'" + record.key + "' (" + KindLabel(kind) + ") has shape [" + shape +
             "], expected [rows, " + std::to_string(dim) + "]");
  }
}

void CheckVector(const TensorRecord& record, EmbeddingKind kind,
                 std::size_t dim) {
  const bool ok =
      (record.shape.size() == 1 && record.shape[0] == dim) ||
      (record.shape.size() == 2 && record.shape[0] == 1 &&
       record.shape[1] == dim);
  if (!ok) {
    Fail(ErrorCode::kDimMismatch,
         "'" + record.key + "' (" + KindLabel(kind) + ") has " +
             std::to_string(record.ElementCount()) + " values, expected " +
             std::to_string(dim));
  }
}

Dataset Dataset::Build(const Manifest& manifest, const FeatureStore& store,
                       const ProposalConfig& proposals,
                       const FeatureSelection& selection) {
  Dataset dataset;
  dataset.selection_ = selection;
  const EmbeddingDims& dims = selection.dims;
  auto videos = std::make_shared<std::vector<VideoEntry>>();
  std::map<std::string, std::size_t, std::less<>> video_index;

  for (const VideoMeta& meta : manifest.videos) {
    VideoEntry entry{meta, GenerateProposals(meta, proposals), {}};
    const TensorRecord& fc6 =
        Timeline(meta, store, EmbeddingKind::kC3dFc6,
                 dims.Get(EmbeddingKind::kC3dFc6));
    const TensorRecord& vac =
        Timeline(meta, store, EmbeddingKind::kVisualActivityConcepts,
                 dims.Get(EmbeddingKind::kVisualActivityConcepts));
    const TensorRecord* object =
        selection.use_object
            ? &Timeline(meta, store, EmbeddingKind::kObjectSegmentation,
                        kObjectClasses)
            : nullptr;
    const TensorRecord* captioning =
        selection.use_captioning
            ? &Timeline(meta, store, EmbeddingKind::kVideoCaptioning,
                        dims.Get(EmbeddingKind::kVideoCaptioning))
            : nullptr;
    const TensorRecord* actionness = nullptr;
    if (meta.clip_feature_refs.contains(EmbeddingKind::kActionness)) {
      actionness = &Timeline(meta, store, EmbeddingKind::kActionness, 1);
    }

    auto pool = [&](const TensorRecord& record, const Interval& bounds,
                    bool use_max) {
      RowRange range = ClipRows(bounds, meta.frame_rate, record.shape[0]);
      auto rows = Rows(record, range);
      return use_max ? TemporalMaxPool(rows) : TemporalAvgPool(rows);
    };

    entry.features.reserve(entry.clips.size());
    for (const ClipCandidate& clip : entry.clips) {
      ClipFeatures features;
      features.fc6 = pool(fc6, clip.bounds, false);
      features.vac = pool(vac, clip.bounds, false);
      if (object) features.object = pool(*object, clip.bounds, true);
      if (captioning) features.captioning = pool(*captioning, clip.bounds, false);
      if (actionness) {
        RowRange range =
            ClipRows(clip.bounds, meta.frame_rate, actionness->shape[0]);
        double sum = 0.0;
        for (std::size_t r = range.begin; r < range.end; ++r) {
          sum += actionness->data[r];
        }
        features.actionness = std::clamp(
            sum / static_cast<double>(range.end - range.begin), 0.0, 1.0);
      }
      entry.features.push_back(std::move(features));
    }
    video_index.emplace(meta.video_id, videos->size());
    videos->push_back(std::move(entry));
  }

  for (const QueryRecord& query : manifest.queries) {
    auto it = video_index.find(query.video_id);
    if (it == video_index.end()) {
      Fail(ErrorCode::kNotFound, "query '" + query.query_id +
                                     "' references unknown video '" +
                                     query.video_id + "'");
    }
    QueryEntry entry{query, {}, it->second};
    entry.features.sentence =
        QueryVector(query, store, selection.sentence_kind,
                    dims.Get(selection.sentence_kind));
    entry.features.vo = QueryVector(query, store, selection.vo_kind,
                                    dims.Get(selection.vo_kind));
    dataset.queries_.push_back(std::move(entry));
  }
  dataset.videos_ = std::move(videos);
  return dataset;
}

Dataset Dataset::WithQueries(std::vector<QueryEntry> queries) const {
  Dataset subset;
  subset.videos_ = videos_;
  subset.queries_ = std::move(queries);
  subset.selection_ = selection_;
  return subset;
}

}  // namespace mml
