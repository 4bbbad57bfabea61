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

#include "mml/training.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "mml/hashing.h"
#include "mml/status.h"

namespace mml {
namespace {

constexpr double kAdamBeta1 = 0.9;
constexpr double kAdamBeta2 = 0.999;
constexpr double kAdamEpsilon = 1e-8;

double Softplus(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

double SmoothL1Grad(double x) {
  if (x > 1.0) return 1.0;
  if (x < -1.0) return -1.0;
  return x;
}

std::uint64_t UniformIndex(std::mt19937_64& rng, std::uint64_t n) {
  return static_cast<std::uint64_t>(ToUnitDouble(rng()) *
                                    static_cast<double>(n));
}

}  // namespace

void TrainConfig::Validate() const {
  if (!(positive_iou_threshold > 0.0 && positive_iou_threshold <= 1.0)) {
    Fail(ErrorCode::kInvalidArgument,
         "positive_iou_threshold must lie in (0, 1]");
  }
  if (negatives_per_positive < 0) {
    Fail(ErrorCode::kInvalidArgument, "negatives_per_positive must be >= 0");
  }
  if (!(lambda_reg >= 0.0)) {
    Fail(ErrorCode::kInvalidArgument, "lambda_reg must be >= 0");
  }
  if (!(learning_rate > 0.0)) {
    Fail(ErrorCode::kInvalidArgument, "learning_rate must be positive");
  }
  if (batch_size < 1) Fail(ErrorCode::kInvalidArgument, "batch_size must be >= 1");
  if (epochs < 0) Fail(ErrorCode::kInvalidArgument, "epochs must be >= 0");
  if (!(validation_fraction >= 0.0 && validation_fraction < 1.0)) {
    Fail(ErrorCode::kInvalidArgument,
         "validation_fraction must lie in [0, 1)");
  }
}

std::vector<TrainingPair> MinePairs(const Dataset& dataset,
                                    const TrainConfig& config,
                                    std::uint64_t seed) {
  config.Validate();
  const auto& videos = dataset.videos();
  std::vector<std::size_t> video_offset(videos.size() + 1, 0);
  for (std::size_t v = 0; v < videos.size(); ++v) {
    video_offset[v + 1] = video_offset[v] + videos[v].clips.size();
  }
  const std::size_t total_clips = video_offset.back();

  std::mt19937_64 rng(MixSeed(seed, {0x9A125}));
  std::vector<TrainingPair> pairs;
  for (std::size_t q = 0; q < dataset.queries().size(); ++q) {
    const QueryEntry& query = dataset.queries()[q];
    const VideoEntry& video = videos[query.video];
    const Interval& gt = query.record.gt;

    std::vector<std::size_t> same_video_negatives;
    std::size_t positives = 0;
    for (std::size_t c = 0; c < video.clips.size(); ++c) {
      const ClipCandidate& clip = video.clips[c];
      const double iou = TemporalIou(clip.bounds, gt);
      if (iou >= config.positive_iou_threshold) {
        TrainingPair pair{q, query.video, c, clip, PairLabel::kPositive,
                          std::make_pair(gt.start - clip.bounds.start,
                                         gt.end - clip.bounds.end)};
        pairs.push_back(std::move(pair));
        ++positives;
      } else if (iou < kNegativeIouCeiling) {
        same_video_negatives.push_back(c);
      }
    }
    if (positives == 0) {
      spdlog::warn("query '{}' has no candidate with IoU >= {}; skipped",
                   query.record.query_id, config.positive_iou_threshold);
      continue;
    }

    const std::size_t other_clips = total_clips - video.clips.size();
    const std::size_t pool = same_video_negatives.size() + other_clips;
    if (pool == 0) continue;
    const std::size_t draws =
        positives * static_cast<std::size_t>(config.negatives_per_positive);
    for (std::size_t k = 0; k < draws; ++k) {
      std::size_t pick = UniformIndex(rng, pool);
      TrainingPair pair;
      pair.query = q;
      pair.label = PairLabel::kNegative;
      if (pick < same_video_negatives.size()) {
        pair.video = query.video;
        pair.clip_index = same_video_negatives[pick];
      } else {
        // Index into the concatenation of all other videos' clips.
        std::size_t global = pick - same_video_negatives.size();
        if (global >= video_offset[query.video]) global += video.clips.size();
        auto it = std::upper_bound(video_offset.begin(), video_offset.end(),
                                   global);
        pair.video = static_cast<std::size_t>(it - video_offset.begin()) - 1;
        pair.clip_index = global - video_offset[pair.video];
      }
      pair.clip = videos[pair.video].clips[pair.clip_index];
      pairs.push_back(std::move(pair));
    }
  }
  return pairs;
}

double SmoothL1(double x) {
  const double a = std::abs(x);
  return a < 1.0 ? 0.5 * x * x : a - 0.5;
}

LossValue Loss(std::span<const HeadOutput> predictions,
               std::span<const TrainingPair> pairs, double lambda_reg,
               std::vector<HeadGrad>* grads) {
  if (pairs.empty()) Fail(ErrorCode::kInvalidArgument, "empty batch");
  if (predictions.size() != pairs.size()) {
    Fail(ErrorCode::kInvalidArgument, "one prediction per pair required");
  }
  std::size_t positives = 0;
  for (const TrainingPair& pair : pairs) {
    if (pair.label == PairLabel::kPositive) ++positives;
  }
  const double n = static_cast<double>(pairs.size());
  const double p = static_cast<double>(positives);

  LossValue loss;
  if (grads) grads->assign(pairs.size(), HeadGrad{});
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const HeadOutput& out = predictions[i];
    const bool positive = pairs[i].label == PairLabel::kPositive;
    const double y = positive ? 1.0 : -1.0;
    loss.aln += Softplus(-y * out.alignment_score) / n;
    if (grads) {
      (*grads)[i].d_score = -y * Logistic(-y * out.alignment_score) / n;
    }
    if (positive) {
      const auto& [t_start, t_end] = pairs[i].offset_target.value();
      const double e_start = out.start_offset - t_start;
      const double e_end = out.end_offset - t_end;
      loss.reg += (SmoothL1(e_start) + SmoothL1(e_end)) / p;
      if (grads) {
        (*grads)[i].d_start = lambda_reg * SmoothL1Grad(e_start) / p;
        (*grads)[i].d_end = lambda_reg * SmoothL1Grad(e_end) / p;
      }
    }
  }
  loss.total = loss.aln + lambda_reg * loss.reg;
  return loss;
}

Optimizer::Optimizer(OptimizerKind kind, double learning_rate)
    : kind_(kind), learning_rate_(learning_rate) {}

void Optimizer::Step(NetworkParams& params, const NetworkParams& grads) {
  auto tensors = params.Tensors();
  auto g = grads.Tensors();
  if (tensors.size() != g.size()) {
    Fail(ErrorCode::kDimMismatch, "gradient shapes differ from parameters");
  }
  ++steps_;
  if (kind_ == OptimizerKind::kSgd) {
    for (std::size_t t = 0; t < tensors.size(); ++t) {
      for (std::size_t i = 0; i < tensors[t].values.size(); ++i) {
        tensors[t].values[i] -= learning_rate_ * g[t].values[i];
      }
    }
  } else {
    if (first_moment_.empty()) {
      for (const auto& tensor : tensors) {
        first_moment_.emplace_back(tensor.values.size(), 0.0);
        second_moment_.emplace_back(tensor.values.size(), 0.0);
      }
    }
    const double step = static_cast<double>(steps_);
    const double c1 = 1.0 - std::pow(kAdamBeta1, step);
    const double c2 = 1.0 - std::pow(kAdamBeta2, step);
    for (std::size_t t = 0; t < tensors.size(); ++t) {
      auto& m = first_moment_[t];
      auto& v = second_moment_[t];
      for (std::size_t i = 0; i < tensors[t].values.size(); ++i) {
        const double gi = g[t].values[i];
        m[i] = kAdamBeta1 * m[i] + (1.0 - kAdamBeta1) * gi;
        v[i] = kAdamBeta2 * v[i] + (1.0 - kAdamBeta2) * gi * gi;
        tensors[t].values[i] -= learning_rate_ * (m[i] / c1) /
                                (std::sqrt(v[i] / c2) + kAdamEpsilon);
      }
    }
  }
  params.Touch();
}

std::pair<Dataset, Dataset> SplitValidation(const Dataset& dataset,
                                            double fraction,
                                            std::uint64_t seed) {
  std::vector<QueryEntry> train;
  std::vector<QueryEntry> validation;
  for (const QueryEntry& query : dataset.queries()) {
    const std::uint64_t h =
        MixSeed(seed, {Fnv1a64(query.record.query_id), 0x5B117});
    if (ToUnitDouble(h) < fraction) {
      validation.push_back(query);
    } else {
      train.push_back(query);
    }
  }
  return {dataset.WithQueries(std::move(train)),
          dataset.WithQueries(std::move(validation))};
}

TrainResult Train(const Dataset& train, const Dataset& validation,
                  const ModelConfig& model, const TrainConfig& config,
                  const EvalSpec& val_spec) {
  config.Validate();
  model.Validate();
  EvalSpec spec = val_spec;
  spec.n_values = {1, 5};
  spec.iou_threshold = 0.5;

  NetworkParams params = NetworkParams::Initialize(model);
  TrainResult result;
  result.best = params;
  if (config.epochs == 0) return result;

  const std::vector<TrainingPair> pairs = MinePairs(train, config, config.seed);
  result.pair_count = pairs.size();
  if (pairs.empty()) {
    Fail(ErrorCode::kRuntime, "no training pairs could be mined");
  }
  Optimizer optimizer(config.optimizer, config.learning_rate);
  const auto& videos = train.videos();
  const auto& queries = train.queries();
  const std::size_t batch_size = static_cast<std::size_t>(config.batch_size);

  std::vector<std::size_t> order(pairs.size());
  std::vector<ForwardTape> tapes(batch_size);
  std::vector<HeadOutput> outputs;
  std::vector<TrainingPair> batch;
  std::vector<HeadGrad> head_grads;
  result.best_r1 = -1.0;

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 shuffle_rng(
        MixSeed(config.seed, {0x5EED, static_cast<std::uint64_t>(epoch)}));
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[UniformIndex(shuffle_rng, i)]);
    }

    double loss_sum = 0.0;
    std::size_t batches = 0;
    for (std::size_t begin = 0; begin < order.size(); begin += batch_size) {
      const std::size_t end = std::min(order.size(), begin + batch_size);
      outputs.clear();
      batch.clear();
      for (std::size_t k = begin; k < end; ++k) {
        const TrainingPair& pair = pairs[order[k]];
        const std::uint64_t dropout_seed = MixSeed(
            config.seed, {static_cast<std::uint64_t>(epoch), order[k]});
        outputs.push_back(Forward(
            params, model, videos[pair.video].features[pair.clip_index],
            queries[pair.query].features, Mode::kTrain, dropout_seed,
            &tapes[k - begin]));
        batch.push_back(pair);
      }
      LossValue loss = Loss(outputs, batch, config.lambda_reg, &head_grads);
      if (!std::isfinite(loss.total)) {
        Fail(ErrorCode::kDiverged,
             "training diverged: non-finite loss at epoch " +
                 std::to_string(epoch) + ", batch " +
                 std::to_string(batches + 1));
      }
      NetworkParams grads = Backward(
          params, std::span<const ForwardTape>(tapes.data(), end - begin),
          head_grads);
      optimizer.Step(params, grads);
      loss_sum += loss.total;
      ++batches;
    }
    if (!params.AllFinite()) {
      Fail(ErrorCode::kDiverged,
           "training diverged: non-finite parameters after epoch " +
               std::to_string(epoch));
    }

    EpochMetrics metrics;
    metrics.epoch = epoch;
    metrics.train_loss = loss_sum / static_cast<double>(batches);
    if (!validation.queries().empty()) {
      EvalResult eval = EvaluateModel(params, model, validation, spec);
      metrics.val_r1 = eval.recall.at(1);
      metrics.val_r5 = eval.recall.at(5);
    }
    result.log.push_back(metrics);
    spdlog::debug("epoch {} loss {:.6f} val R@1 {:.3f} R@5 {:.3f}", epoch,
                  metrics.train_loss, metrics.val_r1, metrics.val_r5);
    if (metrics.val_r1 > result.best_r1) {
      result.best = params;
      result.best_epoch = epoch;
      result.best_r1 = metrics.val_r1;
      result.best_r5 = metrics.val_r5;
    }
  }
  return result;
}

TrainResult TrainWithHoldout(const Dataset& dataset, const ModelConfig& model,
                             const TrainConfig& config,
                             const EvalSpec& val_spec) {
  auto [train, validation] =
      SplitValidation(dataset, config.validation_fraction, config.seed);
  return Train(train, validation, model, config, val_spec);
}

std::string FormatMetricsLog(std::span<const EpochMetrics> log) {
  std::string out;
  for (const EpochMetrics& m : log) {
    nlohmann::json obj = {{"epoch", m.epoch},
                          {"train_loss", m.train_loss},
                          {"val_R@1", m.val_r1},
                          {"val_R@5", m.val_r5}};
    out += obj.dump();
    out += '\n';
  }
  return out;
}

}  // namespace mml
