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

#ifndef MML_EMBEDDING_H_
#define MML_EMBEDDING_H_

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace mml {

enum class EmbeddingKind {
  kSentenceBert,
  kSentenceSkipthought,
  kSentenceRoberta,
  kVoGlove,
  kVoBert,
  kC3dFc6,
  kVisualActivityConcepts,
  kObjectSegmentation,
  kVideoCaptioning,
  kActionness,
};

inline constexpr std::array<EmbeddingKind, 10> kAllEmbeddingKinds = {
    EmbeddingKind::kSentenceBert,       EmbeddingKind::kSentenceSkipthought,
    EmbeddingKind::kSentenceRoberta,    EmbeddingKind::kVoGlove,
    EmbeddingKind::kVoBert,             EmbeddingKind::kC3dFc6,
    EmbeddingKind::kVisualActivityConcepts,
    EmbeddingKind::kObjectSegmentation, EmbeddingKind::kVideoCaptioning,
    EmbeddingKind::kActionness};

// Number of segmentation classes (ADE20K).
inline constexpr std::size_t kObjectClasses = 150;

// Manifest spelling, e.g. "sentence_bert".
std::string_view KindName(EmbeddingKind kind);
std::optional<EmbeddingKind> ParseKind(std::string_view name);

// Built-in widths: sentence_bert 768, sentence_skipthought 4800,
// sentence_roberta 768, vo_glove 300, vo_bert 768, c3d_fc6 4096,
// visual_activity_concepts 400, object_segmentation 150,
// video_captioning 2048, actionness 1.
std::size_t DefaultDim(EmbeddingKind kind);

bool IsSentenceKind(EmbeddingKind kind);
bool IsVoKind(EmbeddingKind kind);
// Kinds stored as per-video timelines rather than per-query vectors.
bool IsVisualKind(EmbeddingKind kind);

// Resolved widths per kind; unset kinds fall back to DefaultDim().
// object_segmentation cannot be overridden.
class EmbeddingDims {
 public:
  EmbeddingDims() = default;

  std::size_t Get(EmbeddingKind kind) const;
  void Override(EmbeddingKind kind, std::size_t dim);
  const std::map<EmbeddingKind, std::size_t>& overrides() const {
    return overrides_;
  }

 private:
  std::map<EmbeddingKind, std::size_t> overrides_;
};

}  // namespace mml

#endif  // MML_EMBEDDING_H_
