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

#include "mml/proposals.h"

#include <algorithm>
#include <cmath>

#include "mml/manifest.h"
#include "mml/status.h"

namespace mml {
namespace {

constexpr double kMinStride = 1e-9;
// Clips ending within this distance of the video end count as reaching it.
constexpr double kEndTolerance = 1e-9;

}  // namespace

void ProposalConfig::Validate() const {
  if (window_lengths.empty()) {
    Fail(ErrorCode::kInvalidArgument, "window_lengths must be non-empty");
  }
  for (double length : window_lengths) {
    if (!(std::isfinite(length) && length > 0.0)) {
      Fail(ErrorCode::kInvalidArgument, "window lengths must be positive");
    }
  }
  if (!(overlap_ratio >= 0.0 && overlap_ratio < 1.0)) {
    Fail(ErrorCode::kInvalidArgument, "overlap_ratio must lie in [0, 1)");
  }
}

std::vector<ClipCandidate> GenerateProposals(const VideoMeta& meta,
                                             const ProposalConfig& config) {
  config.Validate();
  if (!(std::isfinite(meta.duration) && meta.duration > 0.0)) {
    Fail(ErrorCode::kInvalidArgument,
         "video '" + meta.video_id + "' has non-positive duration");
  }
  std::vector<ClipCandidate> clips;
  for (std::size_t scale = 0; scale < config.window_lengths.size(); ++scale) {
    const double length = config.window_lengths[scale];
    const double stride = (1.0 - config.overlap_ratio) * length;
    if (stride < kMinStride) {
      Fail(ErrorCode::kInvalidArgument,
           "proposal stride underflow: overlap_ratio too close to 1");
    }
    for (std::size_t k = 0;; ++k) {
      const double start = static_cast<double>(k) * stride;
      const double end = start + length;
      clips.push_back({meta.video_id, {start, std::min(end, meta.duration)},
                       static_cast<int>(scale)});
      if (end >= meta.duration - kEndTolerance) break;
    }
  }
  return clips;
}

Interval ApplyOffsets(const ClipCandidate& clip, double start_offset,
                      double end_offset, double duration) {
  if (!std::isfinite(start_offset) || !std::isfinite(end_offset)) {
    Fail(ErrorCode::kNonFinite, "location offsets must be finite");
  }
  Interval refined{std::clamp(clip.bounds.start + start_offset, 0.0, duration),
                   std::clamp(clip.bounds.end + end_offset, 0.0, duration)};
  if (refined.end <= refined.start) return clip.bounds;
  return refined;
}

}  // namespace mml
