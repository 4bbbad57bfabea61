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

// Dataset manifest: UTF-8, one JSON object per line. A line carrying a
// "query_id" is a QueryRecord, any other line is a VideoMeta:
//
//   {"video_id":"v0","duration":31.2,"frame_rate":30,
//    "clip_feature_refs":{"c3d_fc6":"v0/c3d_fc6", ...}}
//   {"video_id":"v0","query_id":"q0","text":"person opens door",
//    "vo_pair":{"verb":"open","object":"door"},"gt":[2.0,5.0],
//    "embedding_refs":{"sentence_bert":"s/open_door", ...}}
//
// Visual refs name [rows, dim] timeline tensors sampled every
// kFrameSampleStride frames; row i covers frame i * kFrameSampleStride.

#ifndef MML_MANIFEST_H_
#define MML_MANIFEST_H_

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mml/embedding.h"
#include "mml/interval.h"

namespace mml {

class FeatureStore;

struct VoPair {
  std::string verb;
  std::string object;
  bool operator==(const VoPair&) const = default;
};

struct VideoMeta {
  std::string video_id;
  double duration = 0.0;
  double frame_rate = 0.0;
  std::map<EmbeddingKind, std::string> clip_feature_refs;
  bool operator==(const VideoMeta&) const = default;
};

struct QueryRecord {
  std::string video_id;
  std::string query_id;
  std::string text;
  VoPair vo_pair;
  Interval gt;
  std::map<EmbeddingKind, std::string> embedding_refs;
  bool operator==(const QueryRecord&) const = default;
};

struct Manifest {
  std::vector<VideoMeta> videos;
  std::vector<QueryRecord> queries;

  // Throws kNotFound.
  const VideoMeta& Video(std::string_view video_id) const;
};

// Parses manifest text. Records keep file order. Errors name the 1-based
// line number. When `store` is given every referenced key must resolve
// (kDanglingKey otherwise).
Manifest ParseManifestText(std::string_view text,
                           const FeatureStore* store = nullptr);
Manifest ParseManifest(const std::filesystem::path& path,
                       const FeatureStore* store = nullptr);

std::string FormatManifest(std::span<const VideoMeta> videos,
                           std::span<const QueryRecord> queries);
void WriteManifest(const std::filesystem::path& path,
                   std::span<const VideoMeta> videos,
                   std::span<const QueryRecord> queries);

}  // namespace mml

#endif  // MML_MANIFEST_H_
