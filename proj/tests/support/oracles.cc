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

#include "support/oracles.h"

#include <algorithm>
#include <cmath>
#include <random>

namespace mml::testing {

double SweepIou(const Interval& a, const Interval& b) {
  std::vector<double> points = {a.start, a.end, b.start, b.end};
  std::sort(points.begin(), points.end());
  double inter = 0.0;
  double uni = 0.0;
  for (int i = 0; i + 1 < 4; ++i) {
    const double lo = points[i];
    const double hi = points[i + 1];
    if (hi <= lo) continue;
    const double mid = 0.5 * (lo + hi);
    const bool in_a = mid > a.start && mid < a.end;
    const bool in_b = mid > b.start && mid < b.end;
    if (in_a && in_b) inter += hi - lo;
    if (in_a || in_b) uni += hi - lo;
  }
  return uni > 0.0 ? inter / uni : 0.0;
}

std::map<int, double> BruteRecall(
    const std::map<std::string, std::vector<Interval>>& predictions,
    const std::map<std::string, Interval>& gts, const std::vector<int>& ns,
    double iou_threshold) {
  std::map<int, double> out;
  for (int n : ns) {
    int hits = 0;
    for (const auto& [query, gt] : gts) {
      const std::vector<Interval>& list = predictions.at(query);
      bool hit = false;
      for (int k = 0; k < n && k < static_cast<int>(list.size()); ++k) {
        if (SweepIou(list[static_cast<std::size_t>(k)], gt) >= iou_threshold) {
          hit = true;
        }
      }
      hits += hit ? 1 : 0;
    }
    out[n] = static_cast<double>(hits) / static_cast<double>(gts.size());
  }
  return out;
}

std::vector<double> NaiveObjectPipeline(
    const std::vector<FrameClassMap>& frames, double s_obj) {
  const std::size_t classes = frames.front().classes;
  std::vector<double> pooled(classes, -1.0);
  for (const FrameClassMap& map : frames) {
    const std::size_t pixels = map.height * map.width;
    for (std::size_t c = 0; c < classes; ++c) {
      double sum = 0.0;
      for (std::size_t p = 0; p < pixels; ++p) sum += map.probs[p * classes + c];
      const double mean = sum / static_cast<double>(pixels);
      if (mean > pooled[c]) pooled[c] = mean;
    }
  }
  double norm2 = 0.0;
  for (double x : pooled) norm2 += x * x;
  std::vector<double> out(classes, 0.0);
  if (norm2 == 0.0) return out;
  const double norm = std::sqrt(norm2);
  for (std::size_t c = 0; c < classes; ++c) out[c] = pooled[c] / norm * s_obj;
  return out;
}

double GradientProblem::LossAt(const NetworkParams& params) const {
  std::vector<HeadOutput> outputs;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    outputs.push_back(
        Forward(params, config, clips[i], queries[i], mode, seeds[i]));
  }
  return Loss(outputs, pairs, lambda_reg).total;
}

NetworkParams GradientProblem::AnalyticGradient(
    const NetworkParams& params) const {
  std::vector<ForwardTape> tapes(pairs.size());
  std::vector<HeadOutput> outputs;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    outputs.push_back(Forward(params, config, clips[i], queries[i], mode,
                              seeds[i], &tapes[i]));
  }
  std::vector<HeadGrad> grads;
  Loss(outputs, pairs, lambda_reg, &grads);
  return Backward(params, tapes, grads);
}

GradientProblem MakeGradientProblem(std::uint64_t seed, std::size_t pair_count,
                                    std::size_t common_dim,
                                    std::size_t hidden_dim) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  GradientProblem problem;
  ModelConfig& config = problem.config;
  config.use_object_features = true;
  config.use_captioning_features = true;
  config.common_dim = common_dim;
  config.hidden_dim = hidden_dim;
  config.fusion = {0.5, 0.25, 0.25};
  config.s_cap = 0.5;
  config.seed = seed;
  config.dims.Override(EmbeddingKind::kC3dFc6, 8);
  config.dims.Override(EmbeddingKind::kVideoCaptioning, 6);
  config.dims.Override(EmbeddingKind::kVisualActivityConcepts, 5);
  config.dims.Override(EmbeddingKind::kSentenceBert, 7);
  config.dims.Override(EmbeddingKind::kVoGlove, 6);

  auto vec = [&](std::size_t n) {
    std::vector<double> v(n);
    for (double& x : v) x = normal(rng);
    return v;
  };
  for (std::size_t i = 0; i < pair_count; ++i) {
    ClipFeatures clip;
    clip.fc6 = vec(8);
    clip.captioning = vec(6);
    clip.vac = vec(5);
    clip.object.resize(kObjectClasses);
    for (double& x : clip.object) x = unit(rng);
    problem.clips.push_back(clip);
    problem.queries.push_back({vec(7), vec(6)});

    TrainingPair pair;
    pair.clip.bounds = {0.0, 4.0};
    if (i % 2 == 0) {
      pair.label = PairLabel::kPositive;
      // Offsets kept away from the smooth-L1 kink at |x| = 1.
      pair.offset_target =
          std::make_pair(0.3 * normal(rng), 2.0 + 0.3 * normal(rng));
    }
    problem.pairs.push_back(pair);
    problem.seeds.push_back(seed * 1000 + i);
  }
  return problem;
}

GradientCheck CheckGradient(const GradientProblem& problem,
                            const NetworkParams& params, double h,
                            std::size_t samples_per_tensor,
                            std::uint64_t sample_seed) {
  NetworkParams analytic = problem.AnalyticGradient(params);
  const auto analytic_tensors = std::as_const(analytic).Tensors();
  NetworkParams probe = params;
  auto tensors = probe.Tensors();
  std::mt19937_64 rng(sample_seed);

  GradientCheck result;
  for (std::size_t t = 0; t < tensors.size(); ++t) {
    auto& tensor = tensors[t];
    std::vector<std::size_t> entries;
    if (samples_per_tensor == 0 || samples_per_tensor >= tensor.values.size()) {
      for (std::size_t i = 0; i < tensor.values.size(); ++i) entries.push_back(i);
    } else {
      std::uniform_int_distribution<std::size_t> pick(0, tensor.values.size() - 1);
      for (std::size_t k = 0; k < samples_per_tensor; ++k) {
        entries.push_back(pick(rng));
      }
    }
    for (std::size_t i : entries) {
      const double saved = tensor.values[i];
      tensor.values[i] = saved + h;
      probe.Touch();
      const double up = problem.LossAt(probe);
      tensor.values[i] = saved - h;
      probe.Touch();
      const double down = problem.LossAt(probe);
      tensor.values[i] = saved;
      probe.Touch();
      const double numeric = (up - down) / (2.0 * h);
      const double a = analytic_tensors[t].values[i];
      const double rel = std::abs(a - numeric) /
                         std::max({std::abs(a), std::abs(numeric),
                                   kGradientFloor});
      ++result.entries_checked;
      if (rel > result.max_relative_error) {
        result.max_relative_error = rel;
        result.worst_entry = tensor.name + "[" + std::to_string(i) + "] " +
                             "analytic " + std::to_string(a) + " numeric " +
                             std::to_string(numeric);
      }
    }
  }
  return result;
}

}  // namespace mml::testing
