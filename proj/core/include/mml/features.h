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

// Clip-level feature aggregation.
//
// Object pathway:  sampled frames -> per-frame class means -> temporal max
//                  pool -> L2 normalize * s_obj -> dropout(d_obj)
// Activity concepts: dropout(d_vac), concatenated after the object part.
// Captioning:      per-frame vectors -> average pool -> L2 normalize *
//                  s_cap, concatenated after C3D fc6.

#ifndef MML_FEATURES_H_
#define MML_FEATURES_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace mml {

inline constexpr std::int64_t kFrameSampleStride = 16;

// 0, 16, 32, ... < frame_count.
std::vector<std::int64_t> SampleFrameIndices(std::int64_t frame_count);

// Per-pixel class distributions of one segmented frame, laid out as
// probs[(row * width + col) * classes + c].
struct FrameClassMap {
  std::size_t height = 0;
  std::size_t width = 0;
  std::size_t classes = 150;
  std::vector<double> probs;

  void Validate() const;
};

// Mean class distribution over all pixels.
std::vector<double> FrameClassMeans(const FrameClassMap& map);

std::vector<double> TemporalMaxPool(std::span<const std::vector<double>> frames);
std::vector<double> TemporalAvgPool(std::span<const std::vector<double>> frames);

// (v / |v|_2) * scale, or zeros when |v|_2 == 0.
std::vector<double> NormalizeAndScale(std::span<const double> v, double scale);

enum class Mode { kTrain, kEval };

// Inverted dropout: in train mode every entry is zeroed with probability
// `ratio` and survivors are multiplied by 1 / (1 - ratio). Eval mode
// returns the input unchanged. Deterministic in `seed`.
std::vector<double> ApplyDropout(std::span<const double> v, double ratio,
                                 Mode mode, std::uint64_t seed);

struct HighLevelFusionConfig {
  double s_obj = 0.005;
  double d_obj = 0.5;
  double d_vac = 0.0;

  void Validate() const;
  bool operator==(const HighLevelFusionConfig&) const = default;
};

struct ObjectFeature {
  std::vector<double> v_obj;  // kObjectClasses entries
};

struct ActivityConceptFeature {
  std::vector<double> v_vac;
};

// dropout(normalize_and_scale(v_obj, s_obj), d_obj) ++ dropout(v_vac, d_vac).
// The two dropout masks use independent streams derived from `seed`.
std::vector<double> BuildMlpHighInput(const ObjectFeature& object,
                                      const ActivityConceptFeature& activity,
                                      const HighLevelFusionConfig& config,
                                      Mode mode, std::uint64_t seed);

// fc6 ++ normalize_and_scale(captioning, s_cap).
std::vector<double> BuildLowInput(std::span<const double> fc6,
                                  std::span<const double> captioning,
                                  double s_cap);

}  // namespace mml

#endif  // MML_FEATURES_H_
