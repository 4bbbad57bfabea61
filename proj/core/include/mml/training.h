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

// Pair mining, alignment + offset regression loss and the epoch loop.
//
// Loss per batch of N pairs (P of them positive):
//   aln = (1/N) sum log(1 + exp(-y * score)),   y = +1 / -1
//   reg = (1/P) sum smoothL1(pred_start - t_start) + smoothL1(pred_end - t_end)
//   total = aln + lambda_reg * reg

#ifndef MML_TRAINING_H_
#define MML_TRAINING_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mml/dataset.h"
#include "mml/evaluation.h"
#include "mml/network.h"

namespace mml {

enum class OptimizerKind { kSgd, kAdam };

struct TrainConfig {
  double positive_iou_threshold = 0.5;
  int negatives_per_positive = 10;
  double lambda_reg = 0.01;
  double learning_rate = 1e-3;
  int batch_size = 64;
  int epochs = 30;
  std::uint64_t seed = 0;
  OptimizerKind optimizer = OptimizerKind::kSgd;
  double validation_fraction = 0.1;

  void Validate() const;
};

// Same-video clips below this IoU with the ground truth may be negatives.
inline constexpr double kNegativeIouCeiling = 0.15;

enum class PairLabel { kPositive, kNegative };

struct TrainingPair {
  std::size_t query = 0;       // index into Dataset::queries()
  std::size_t video = 0;       // video owning the clip
  std::size_t clip_index = 0;  // index into that video's clips
  ClipCandidate clip;
  PairLabel label = PairLabel::kNegative;
  // gt - clip bounds; set iff positive.
  std::optional<std::pair<double, double>> offset_target;
};

// Positives: every clip of the query's video with IoU >= threshold.
// Negatives: negatives_per_positive draws per positive, uniform with
// replacement over other videos' clips plus same-video clips with IoU
// below kNegativeIouCeiling. Queries without positives are skipped with
// a warning.
std::vector<TrainingPair> MinePairs(const Dataset& dataset,
                                    const TrainConfig& config,
                                    std::uint64_t seed);

struct LossValue {
  double total = 0.0;
  double aln = 0.0;
  double reg = 0.0;
};

double SmoothL1(double x);

// Throws kInvalidArgument on an empty batch. When `grads` is given it
// receives d(total)/d(head outputs) per pair.
LossValue Loss(std::span<const HeadOutput> predictions,
               std::span<const TrainingPair> pairs, double lambda_reg,
               std::vector<HeadGrad>* grads = nullptr);

class Optimizer {
 public:
  Optimizer(OptimizerKind kind, double learning_rate);

  void Step(NetworkParams& params, const NetworkParams& grads);

 private:
  OptimizerKind kind_;
  double learning_rate_;
  std::int64_t steps_ = 0;
  std::vector<std::vector<double>> first_moment_;
  std::vector<std::vector<double>> second_moment_;
};

// (train, validation) by seeded hash of query_id.
std::pair<Dataset, Dataset> SplitValidation(const Dataset& dataset,
                                            double fraction,
                                            std::uint64_t seed);

struct EpochMetrics {
  int epoch = 0;
  double train_loss = 0.0;
  double val_r1 = 0.0;
  double val_r5 = 0.0;
};

struct TrainResult {
  NetworkParams best;
  int best_epoch = 0;  // 0 = initialization
  double best_r1 = 0.0;
  double best_r5 = 0.0;
  std::vector<EpochMetrics> log;
  std::size_t pair_count = 0;
};

// Trains on `train`, validating on `validation` after every epoch with
// R@1 / R@5 at IoU 0.5 (NMS per `val_spec`). Keeps the epoch with the
// highest validation R@1; ties keep the earlier epoch. Throws kDiverged on
// a non-finite loss.
TrainResult Train(const Dataset& train, const Dataset& validation,
                  const ModelConfig& model, const TrainConfig& config,
                  const EvalSpec& val_spec = {});

// Runs Train() on a seeded validation split of `dataset`.
TrainResult TrainWithHoldout(const Dataset& dataset, const ModelConfig& model,
                             const TrainConfig& config,
                             const EvalSpec& val_spec = {});

// One JSON line per epoch: epoch, train_loss, val_R@1, val_R@5.
std::string FormatMetricsLog(std::span<const EpochMetrics> log);

}  // namespace mml

#endif  // MML_TRAINING_H_
