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

#include "mml/features.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "mml/embedding.h"
#include "mml/hashing.h"
#include "mml/status.h"

namespace mml {
namespace {

constexpr double kDistributionTolerance = 1e-6;

void CheckFinite(std::span<const double> v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) {
      Fail(ErrorCode::kNonFinite, std::string(what) + " must be finite");
    }
  }
}

void CheckFrames(std::span<const std::vector<double>> frames,
                 const char* what) {
  if (frames.empty()) {
    Fail(ErrorCode::kInvalidArgument, std::string(what) + ": no frames");
  }
  const std::size_t dim = frames.front().size();
  for (const auto& frame : frames) {
    if (frame.size() != dim) {
      Fail(ErrorCode::kDimMismatch,
           std::string(what) + ": frames have unequal dimensions");
    }
  }
}

void CheckRatio(double ratio, const char* what) {
  if (!(ratio >= 0.0 && ratio < 1.0)) {
    Fail(ErrorCode::kInvalidArgument,
         std::string(what) + " must lie in [0, 1)");
  }
}

}  // namespace

std::vector<std::int64_t> SampleFrameIndices(std::int64_t frame_count) {
  if (frame_count < 1) {
    Fail(ErrorCode::kInvalidArgument, "frame_count must be >= 1");
  }
  std::vector<std::int64_t> indices;
  for (std::int64_t i = 0; i < frame_count; i += kFrameSampleStride) {
    indices.push_back(i);
  }
  return indices;
}

void FrameClassMap::Validate() const {
  if (height == 0 || width == 0 || classes == 0) {
    Fail(ErrorCode::kInvalidArgument, "frame class map has an empty extent");
  }
  if (probs.size() != height * width * classes) {
    Fail(ErrorCode::kDimMismatch, "frame class map size mismatch");
  }
  for (std::size_t p = 0; p < height * width; ++p) {
    double sum = 0.0;
    for (std::size_t c = 0; c < classes; ++c) {
      double x = probs[p * classes + c];
      if (!(x >= 0.0) || !std::isfinite(x)) {
        Fail(ErrorCode::kInvalidArgument,
             "pixel " + std::to_string(p) + " has a negative probability");
      }
      sum += x;
    }
    if (std::abs(sum - 1.0) > kDistributionTolerance) {
      Fail(ErrorCode::kInvalidArgument,
           "pixel " + std::to_string(p) + " distribution does not sum to 1");
    }
  }
}

std::vector<double> FrameClassMeans(const FrameClassMap& map) {
  map.Validate();
  const std::size_t pixels = map.height * map.width;
  std::vector<double> means(map.classes, 0.0);
  for (std::size_t p = 0; p < pixels; ++p) {
    const double* pixel = map.probs.data() + p * map.classes;
    for (std::size_t c = 0; c < map.classes; ++c) means[c] += pixel[c];
  }
  for (double& m : means) m /= static_cast<double>(pixels);
  return means;
}

std::vector<double> TemporalMaxPool(
    std::span<const std::vector<double>> frames) {
  CheckFrames(frames, "temporal max pool");
  std::vector<double> out = frames.front();
  for (const auto& frame : frames.subspan(1)) {
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] = std::max(out[i], frame[i]);
    }
  }
  return out;
}

std::vector<double> TemporalAvgPool(
    std::span<const std::vector<double>> frames) {
  CheckFrames(frames, "temporal average pool");
  std::vector<double> out(frames.front().size(), 0.0);
  for (const auto& frame : frames) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += frame[i];
  }
  const double n = static_cast<double>(frames.size());
  for (double& x : out) x /= n;
  return out;
}

std::vector<double> NormalizeAndScale(std::span<const double> v,
                                      double scale) {
  CheckFinite(v, "feature vector");
  std::vector<double> out(v.size(), 0.0);
  double peak = 0.0;
  for (double x : v) peak = std::max(peak, std::abs(x));
  if (peak == 0.0) return out;
  // Divide by the peak first so huge or tiny inputs neither overflow nor
  // underflow the sum of squares.
  double sq = 0.0;
  for (double x : v) sq += (x / peak) * (x / peak);
  const double norm = std::sqrt(sq);
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = v[i] / peak / norm * scale;
  }
  return out;
}

std::vector<double> ApplyDropout(std::span<const double> v, double ratio,
                                 Mode mode, std::uint64_t seed) {
  CheckRatio(ratio, "dropout ratio");
  std::vector<double> out(v.begin(), v.end());
  if (mode == Mode::kEval || ratio == 0.0) return out;
  std::mt19937_64 rng(seed);
  const double keep_scale = 1.0 / (1.0 - ratio);
  for (double& x : out) {
    x = ToUnitDouble(rng()) < ratio ? 0.0 : x * keep_scale;
  }
  return out;
}

void HighLevelFusionConfig::Validate() const {
  if (!(s_obj >= 0.0 && s_obj <= 1.0)) {
    Fail(ErrorCode::kInvalidArgument, "s_obj must lie in [0, 1]");
  }
  CheckRatio(d_obj, "d_obj");
  CheckRatio(d_vac, "d_vac");
}

std::vector<double> BuildMlpHighInput(const ObjectFeature& object,
                                      const ActivityConceptFeature& activity,
                                      const HighLevelFusionConfig& config,
                                      Mode mode, std::uint64_t seed) {
  config.Validate();
  if (object.v_obj.size() != kObjectClasses) {
    Fail(ErrorCode::kDimMismatch,
         "object feature must have " + std::to_string(kObjectClasses) +
             " entries, got " + std::to_string(object.v_obj.size()));
  }
  if (activity.v_vac.empty()) {
    Fail(ErrorCode::kDimMismatch, "activity concept feature is empty");
  }
  CheckFinite(activity.v_vac, "activity concept feature");
  std::vector<double> out =
      ApplyDropout(NormalizeAndScale(object.v_obj, config.s_obj),
                   config.d_obj, mode, MixSeed(seed, {1}));
  std::vector<double> vac =
      ApplyDropout(activity.v_vac, config.d_vac, mode, MixSeed(seed, {2}));
  out.insert(out.end(), vac.begin(), vac.end());
  return out;
}

std::vector<double> BuildLowInput(std::span<const double> fc6,
                                  std::span<const double> captioning,
                                  double s_cap) {
  if (fc6.empty() || captioning.empty()) {
    Fail(ErrorCode::kDimMismatch, "low-level features must be non-empty");
  }
  if (!(s_cap >= 0.0 && s_cap <= 1.0)) {
    Fail(ErrorCode::kInvalidArgument, "s_cap must lie in [0, 1]");
  }
  CheckFinite(fc6, "fc6 feature");
  std::vector<double> out(fc6.begin(), fc6.end());
  std::vector<double> cap = NormalizeAndScale(captioning, s_cap);
  out.insert(out.end(), cap.begin(), cap.end());
  return out;
}

}  // namespace mml
