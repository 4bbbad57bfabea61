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

#include "mml/embedding.h"

#include <string>

#include "mml/status.h"

namespace mml {

std::string_view KindName(EmbeddingKind kind) {
  switch (kind) {
    case EmbeddingKind::kSentenceBert: return "sentence_bert";
    case EmbeddingKind::kSentenceSkipthought: return "sentence_skipthought";
    case EmbeddingKind::kSentenceRoberta: return "sentence_roberta";
    case EmbeddingKind::kVoGlove: return "vo_glove";
    case EmbeddingKind::kVoBert: return "vo_bert";
    case EmbeddingKind::kC3dFc6: return "c3d_fc6";
    case EmbeddingKind::kVisualActivityConcepts:
      return "visual_activity_concepts";
    case EmbeddingKind::kObjectSegmentation: return "object_segmentation";
    case EmbeddingKind::kVideoCaptioning: return "video_captioning";
    case EmbeddingKind::kActionness: return "actionness";
  }
  return "unknown";
}

std::optional<EmbeddingKind> ParseKind(std::string_view name) {
  for (EmbeddingKind kind : kAllEmbeddingKinds) {
    if (KindName(kind) == name) return kind;
  }
  return std::nullopt;
}

std::size_t DefaultDim(EmbeddingKind kind) {
  switch (kind) {
    case EmbeddingKind::kSentenceBert: return 768;
    case EmbeddingKind::kSentenceSkipthought: return 4800;
    case EmbeddingKind::kSentenceRoberta: return 768;
    case EmbeddingKind::kVoGlove: return 300;
    case EmbeddingKind::kVoBert: return 768;
    case EmbeddingKind::kC3dFc6: return 4096;
    case EmbeddingKind::kVisualActivityConcepts: return 400;
    case EmbeddingKind::kObjectSegmentation: return kObjectClasses;
    case EmbeddingKind::kVideoCaptioning: return 2048;
    case EmbeddingKind::kActionness: return 1;
  }
  return 0;
}

bool IsSentenceKind(EmbeddingKind kind) {
  return kind == EmbeddingKind::kSentenceBert ||
         kind == EmbeddingKind::kSentenceSkipthought ||
         kind == EmbeddingKind::kSentenceRoberta;
}

bool IsVoKind(EmbeddingKind kind) {
  return kind == EmbeddingKind::kVoGlove || kind == EmbeddingKind::kVoBert;
}

bool IsVisualKind(EmbeddingKind kind) {
  return !IsSentenceKind(kind) && !IsVoKind(kind);
}

std::size_t EmbeddingDims::Get(EmbeddingKind kind) const {
  auto it = overrides_.find(kind);
  return it == overrides_.end() ? DefaultDim(kind) : it->second;
}

void EmbeddingDims::Override(EmbeddingKind kind, std::size_t dim) {
  if (dim == 0) {
    Fail(ErrorCode::kInvalidArgument,
         "dimension override for " + std::string(KindName(kind)) +
             " must be positive");
  }
  if ((kind == EmbeddingKind::kObjectSegmentation ||
       kind == EmbeddingKind::kActionness) &&
      dim != DefaultDim(kind)) {
    Fail(ErrorCode::kInvalidArgument,
         std::string(KindName(kind)) + " has a fixed width of " +
             std::to_string(DefaultDim(kind)));
  }
  overrides_[kind] = dim;
}

}  // namespace mml
