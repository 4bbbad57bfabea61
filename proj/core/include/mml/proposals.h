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

#ifndef MML_PROPOSALS_H_
#define MML_PROPOSALS_H_

#include <string>
#include <vector>

#include "mml/interval.h"

namespace mml {

struct VideoMeta;

// Multi-scale sliding windows. Defaults are 128 and 256 frames at 30 fps.
struct ProposalConfig {
  std::vector<double> window_lengths = {128.0 / 30.0, 256.0 / 30.0};
  double overlap_ratio = 0.8;

  void Validate() const;
};

struct ClipCandidate {
  std::string video_id;
  Interval bounds;
  int scale_index = 0;
  bool operator==(const ClipCandidate&) const = default;
};

// For each window length L (in config order) emits clips starting at
// k * (1 - overlap) * L until one reaches the end of the video; the last
// clip is clamped to the duration.
std::vector<ClipCandidate> GenerateProposals(const VideoMeta& meta,
                                             const ProposalConfig& config);

// [clip.start + start_offset, clip.end + end_offset] clamped to
// [0, duration]. A degenerate result falls back to the clip bounds.
Interval ApplyOffsets(const ClipCandidate& clip, double start_offset,
                      double end_offset, double duration);

}  // namespace mml

#endif  // MML_PROPOSALS_H_
