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

// Independent reference implementations used by unit and acceptance tests.
// They share no code with mml_core beyond the plain data types.

#ifndef MML_TESTS_SUPPORT_ORACLES_H_
#define MML_TESTS_SUPPORT_ORACLES_H_

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "mml/dataset.h"
#include "mml/features.h"
#include "mml/interval.h"
#include "mml/network.h"
#include "mml/training.h"

namespace mml::testing {

// IoU by sweeping the sorted endpoints of both intervals.
double SweepIou(const Interval& a, const Interval& b);

// Recall per n by explicit hit counting.
std::map<int, double> BruteRecall(
    const std::map<std::string, std::vector<Interval>>& predictions,
    const std::map<std::string, Interval>& gts, const std::vector<int>& ns,
    double iou_threshold);

// frames[f] holds one map; per-frame class means, max over frames,
// L2 normalization and scaling, written as plain loops.
std::vector<double> NaiveObjectPipeline(
    const std::vector<FrameClassMap>& frames, double s_obj);

// Total loss of `pairs` against per-pair features, dropout seeds fixed.
struct GradientProblem {
  ModelConfig config;
  std::vector<ClipFeatures> clips;
  std::vector<QueryFeatures> queries;
  std::vector<TrainingPair> pairs;
  std::vector<std::uint64_t> seeds;
  double lambda_reg = 0.01;
  Mode mode = Mode::kTrain;

  double LossAt(const NetworkParams& params) const;
  NetworkParams AnalyticGradient(const NetworkParams& params) const;
};

// Random problem with small widths: `pair_count` pairs, half positive.
GradientProblem MakeGradientProblem(std::uint64_t seed, std::size_t pair_count,
                                    std::size_t common_dim,
                                    std::size_t hidden_dim);

struct GradientCheck {
  double max_relative_error = 0.0;
  std::size_t entries_checked = 0;
  std::string worst_entry;
};

inline constexpr double kGradientFloor = 1e-4;

// Central differences with step h. `samples_per_tensor` = 0 checks every
// entry; otherwise a seeded sample per tensor.
GradientCheck CheckGradient(const GradientProblem& problem,
                            const NetworkParams& params, double h,
                            std::size_t samples_per_tensor,
                            std::uint64_t sample_seed);

}  // namespace mml::testing

#endif  // MML_TESTS_SUPPORT_ORACLES_H_
