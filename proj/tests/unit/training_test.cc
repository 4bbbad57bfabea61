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

#include <cmath>
#include <functional>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "mml/proposals.h"
#include "mml/status.h"
#include "mml/training.h"
#include "support/fixtures.h"
#include "support/oracles.h"

namespace mml {
namespace {

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kRuntime;
}

SynthConfig SmallSynth(std::uint64_t seed, int videos, int queries) {
  SynthConfig synth;
  synth.n_videos = videos;
  synth.n_queries = queries;
  synth.seed = seed;
  return synth;
}

// One synthetic video whose single query has ground truth `gt`, with
// 10 s windows at half overlap: [0,10], [5,15], [10,20], ...
Dataset OneQueryDataset(const Interval& gt) {
  SynthConfig synth = SmallSynth(3, 2, 2);
  synth.test_fraction = 0.5;
  SynthDataset data = GenerateSynth(synth);
  FeatureStore store;
  for (const TensorRecord& r : data.records) store.Add(r);
  QueryRecord query = data.train_queries.front();
  query.gt = gt;
  Manifest manifest{data.videos, {query}};
  return Dataset::Build(manifest, store, {{10.0}, 0.5},
                        testing::DeskModel(0).Selection());
}

TEST(MinePairsTest, PartialOverlapPositive) {
  Dataset dataset = OneQueryDataset({12, 18});
  TrainConfig config;
  auto pairs = MinePairs(dataset, config, 1);
  std::vector<TrainingPair> positives;
  for (const auto& p : pairs) {
    if (p.label == PairLabel::kPositive) positives.push_back(p);
  }
  ASSERT_EQ(positives.size(), 1u);
  EXPECT_EQ(positives[0].clip.bounds, (Interval{10, 20}));
  ASSERT_TRUE(positives[0].offset_target.has_value());
  EXPECT_EQ(positives[0].offset_target->first, 2.0);
  EXPECT_EQ(positives[0].offset_target->second, -2.0);
  EXPECT_EQ(pairs.size(), 1u + static_cast<std::size_t>(config.negatives_per_positive));
}

TEST(MinePairsTest, ExactMatchHasZeroOffsets) {
  Dataset dataset = OneQueryDataset({10, 20});
  TrainConfig config;
  config.positive_iou_threshold = 1.0;
  auto pairs = MinePairs(dataset, config, 1);
  ASSERT_FALSE(pairs.empty());
  EXPECT_EQ(pairs[0].label, PairLabel::kPositive);
  EXPECT_EQ(*pairs[0].offset_target, std::make_pair(0.0, 0.0));
}

TEST(MinePairsTest, NoExactMatchAtThresholdOneSkipsQuery) {
  Dataset dataset = OneQueryDataset({12, 18});
  TrainConfig config;
  config.positive_iou_threshold = 1.0;
  EXPECT_TRUE(MinePairs(dataset, config, 1).empty());
}

TEST(MinePairsTest, InvariantsHoldOnSynthData) {
  testing::SynthSplit split =
      testing::BuildSynthSplit(SmallSynth(4, 10, 40), testing::DeskModel(0));
  TrainConfig config;
  auto pairs = MinePairs(split.train, config, 9);
  ASSERT_FALSE(pairs.empty());
  const auto& queries = split.train.queries();
  const auto& videos = split.train.videos();
  std::size_t positives = 0;
  for (const auto& p : pairs) {
    const QueryEntry& q = queries[p.query];
    const VideoMeta& video = videos[p.video].meta;
    EXPECT_EQ(videos[p.video].clips[p.clip_index], p.clip);
    const double iou = testing::SweepIou(p.clip.bounds, q.record.gt);
    if (p.label == PairLabel::kPositive) {
      ++positives;
      EXPECT_EQ(p.video, q.video);
      EXPECT_GE(iou, config.positive_iou_threshold);
      ASSERT_TRUE(p.offset_target.has_value());
      Interval back = ApplyOffsets(p.clip, p.offset_target->first,
                                   p.offset_target->second, video.duration);
      EXPECT_NEAR(back.start, q.record.gt.start, 1e-12);
      EXPECT_NEAR(back.end, q.record.gt.end, 1e-12);
    } else {
      EXPECT_FALSE(p.offset_target.has_value());
      if (p.video == q.video) {
        EXPECT_LT(iou, kNegativeIouCeiling);
      }
    }
  }
  EXPECT_EQ(pairs.size(),
            positives * (1 + static_cast<std::size_t>(config.negatives_per_positive)));
  EXPECT_EQ(MinePairs(split.train, config, 9).size(), pairs.size());
  auto again = MinePairs(split.train, config, 9);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    EXPECT_EQ(again[i].clip, pairs[i].clip);
    EXPECT_EQ(again[i].label, pairs[i].label);
  }
}

TEST(OffsetTargetTest, RoundTripIdentity) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const double duration = 20.0 + 40.0 * unit(rng);
    const double gs = unit(rng) * (duration - 5.0);
    const Interval gt{gs, gs + 0.5 + unit(rng) * (duration - gs - 0.5)};
    const double cs = unit(rng) * (duration - 1.0);
    const ClipCandidate clip{"v", {cs, cs + 0.5 + unit(rng) * (duration - cs - 0.5)}, 0};
    Interval back = ApplyOffsets(clip, gt.start - clip.bounds.start,
                                 gt.end - clip.bounds.end, duration);
    EXPECT_NEAR(back.start, gt.start, 1e-12);
    EXPECT_NEAR(back.end, gt.end, 1e-12);
  }
}

TrainingPair Positive(double start_target, double end_target) {
  TrainingPair pair;
  pair.label = PairLabel::kPositive;
  pair.offset_target = std::make_pair(start_target, end_target);
  return pair;
}

TEST(LossTest, Examples) {
  std::vector<TrainingPair> positive = {Positive(0.5, -0.5)};
  std::vector<HeadOutput> exact = {{0.0, 0.5, -0.5}};
  LossValue a = Loss(exact, positive, 0.01);
  EXPECT_NEAR(a.aln, std::log(2.0), 1e-15);
  EXPECT_EQ(a.reg, 0.0);
  EXPECT_NEAR(a.total, std::log(2.0), 1e-15);

  std::vector<TrainingPair> negative(1);
  LossValue b = Loss(std::vector<HeadOutput>{{0.0, 3.0, 3.0}}, negative, 0.01);
  EXPECT_NEAR(b.aln, std::log(2.0), 1e-15);
  EXPECT_EQ(b.reg, 0.0);

  LossValue c = Loss(std::vector<HeadOutput>{{10.0, 0.5, -0.5}}, positive, 0.01);
  EXPECT_NEAR(c.aln, 4.54e-5, 5e-8);
  EXPECT_NEAR(c.aln, std::log1p(std::exp(-10.0)), 1e-18);
}

TEST(LossTest, SmoothL1) {
  EXPECT_EQ(SmoothL1(0.0), 0.0);
  EXPECT_EQ(SmoothL1(0.5), 0.125);
  EXPECT_EQ(SmoothL1(-2.0), 1.5);
  EXPECT_EQ(SmoothL1(1.0), 0.5);
}

TEST(LossTest, RegressionAveragesOverPositives) {
  std::vector<TrainingPair> pairs = {Positive(0, 0), TrainingPair{}, Positive(0, 0)};
  std::vector<HeadOutput> out = {{0, 2, 0}, {0, 9, 9}, {0, 0, -0.5}};
  LossValue loss = Loss(out, pairs, 0.5);
  EXPECT_NEAR(loss.reg, (1.5 + 0.125) / 2, 1e-15);
  EXPECT_NEAR(loss.total, loss.aln + 0.5 * loss.reg, 1e-15);
}

TEST(LossTest, EmptyBatchAndMismatch) {
  EXPECT_EQ(CodeOf([] { Loss({}, {}, 0.01); }), ErrorCode::kInvalidArgument);
  std::vector<TrainingPair> pairs(2);
  std::vector<HeadOutput> out(1);
  EXPECT_EQ(CodeOf([&] { Loss(out, pairs, 0.01); }), ErrorCode::kInvalidArgument);
}

TEST(LossTest, NonNegativeAndGradientMatches) {
  std::mt19937_64 rng(10);
  std::normal_distribution<double> normal(0.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<TrainingPair> pairs;
    std::vector<HeadOutput> out;
    for (int i = 0; i < 5; ++i) {
      pairs.push_back(i % 2 ? TrainingPair{} : Positive(normal(rng), normal(rng)));
      out.push_back({normal(rng), normal(rng), normal(rng)});
    }
    std::vector<HeadGrad> grads;
    LossValue loss = Loss(out, pairs, 0.3, &grads);
    EXPECT_GE(loss.total, 0.0);
    EXPECT_GE(loss.aln, 0.0);
    EXPECT_GE(loss.reg, 0.0);
    const double h = 1e-6;
    for (std::size_t i = 0; i < out.size(); ++i) {
      auto probe = out;
      probe[i].alignment_score += h;
      const double up = Loss(probe, pairs, 0.3).total;
      probe[i].alignment_score -= 2 * h;
      const double down = Loss(probe, pairs, 0.3).total;
      EXPECT_NEAR(grads[i].d_score, (up - down) / (2 * h), 1e-8);
    }
  }
}

TEST(TrainConfigTest, Validation) {
  TrainConfig config;
  EXPECT_NO_THROW(config.Validate());
  config.positive_iou_threshold = 0.0;
  EXPECT_THROW(config.Validate(), Error);
  config = {};
  config.learning_rate = 0.0;
  EXPECT_THROW(config.Validate(), Error);
  config = {};
  config.batch_size = 0;
  EXPECT_THROW(config.Validate(), Error);
  config = {};
  config.lambda_reg = -1.0;
  EXPECT_THROW(config.Validate(), Error);
}

class TrainTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    split_ = new testing::SynthSplit(
        testing::BuildSynthSplit(SmallSynth(5, 13, 50), testing::DeskModel(0)));
  }
  static void TearDownTestSuite() {
    delete split_;
    split_ = nullptr;
  }
  static testing::SynthSplit* split_;
};

testing::SynthSplit* TrainTest::split_ = nullptr;

TEST_F(TrainTest, ZeroEpochsReturnsInitialization) {
  ModelConfig model = testing::DeskModel(1);
  TrainConfig config = testing::DeskTraining(2, 0);
  TrainResult result = TrainWithHoldout(split_->train, model, config);
  EXPECT_TRUE(result.log.empty());
  EXPECT_EQ(result.best_epoch, 0);
  NetworkParams init = NetworkParams::Initialize(model);
  auto lhs = std::as_const(init).Tensors();
  auto rhs = std::as_const(result.best).Tensors();
  for (std::size_t t = 0; t < lhs.size(); ++t) {
    EXPECT_TRUE(std::equal(lhs[t].values.begin(), lhs[t].values.end(),
                           rhs[t].values.begin()));
  }
}

TEST_F(TrainTest, DefaultSgdLossDecreasesOverFirstFiveEpochs) {
  ModelConfig model = testing::DeskModel(1);
  TrainConfig config;
  config.seed = 3;
  config.epochs = 5;
  TrainResult result = TrainWithHoldout(split_->train, model, config);
  ASSERT_EQ(result.log.size(), 5u);
  for (std::size_t e = 1; e < result.log.size(); ++e) {
    EXPECT_LT(result.log[e].train_loss, result.log[e - 1].train_loss)
        << "epoch " << result.log[e].epoch;
  }
}

TEST_F(TrainTest, SameSeedIsBitwiseIdentical) {
  ModelConfig model = testing::DeskModel(1);
  TrainConfig config = testing::DeskTraining(4, 3);
  TrainResult a = TrainWithHoldout(split_->train, model, config);
  TrainResult b = TrainWithHoldout(split_->train, model, config);
  EXPECT_EQ(a.best_epoch, b.best_epoch);
  EXPECT_EQ(FormatMetricsLog(a.log), FormatMetricsLog(b.log));
  auto lhs = std::as_const(a.best).Tensors();
  auto rhs = std::as_const(b.best).Tensors();
  for (std::size_t t = 0; t < lhs.size(); ++t) {
    EXPECT_TRUE(std::equal(lhs[t].values.begin(), lhs[t].values.end(),
                           rhs[t].values.begin()));
  }
  config.seed = 5;
  TrainResult c = TrainWithHoldout(split_->train, model, config);
  EXPECT_NE(FormatMetricsLog(a.log), FormatMetricsLog(c.log));
}

TEST_F(TrainTest, BestEpochHasHighestValidationRecall) {
  TrainResult result = TrainWithHoldout(split_->train, testing::DeskModel(1),
                                        testing::DeskTraining(6, 4));
  ASSERT_GE(result.best_epoch, 1);
  double best = -1.0;
  int best_epoch = 0;
  for (const auto& m : result.log) {
    if (m.val_r1 > best) {
      best = m.val_r1;
      best_epoch = m.epoch;
    }
  }
  EXPECT_EQ(result.best_epoch, best_epoch);
  EXPECT_EQ(result.best_r1, best);
}

TEST_F(TrainTest, DivergenceNamesTheEpoch) {
  TrainConfig config;
  config.learning_rate = 1e308;
  config.epochs = 3;
  try {
    TrainWithHoldout(split_->train, testing::DeskModel(1), config);
    FAIL() << "expected divergence";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDiverged);
    EXPECT_NE(std::string(e.what()).find("epoch"), std::string::npos);
  }
}

TEST_F(TrainTest, MetricsLogHasOneLinePerEpoch) {
  TrainResult result = TrainWithHoldout(split_->train, testing::DeskModel(1),
                                        testing::DeskTraining(7, 2));
  const std::string log = FormatMetricsLog(result.log);
  EXPECT_EQ(std::count(log.begin(), log.end(), '\n'), 2);
  EXPECT_NE(log.find("\"val_R@1\""), std::string::npos);
  EXPECT_NE(log.find("\"train_loss\""), std::string::npos);
}

TEST(SingleBatchTest, TwentyStepsHalveTheLoss) {
  testing::GradientProblem problem = testing::MakeGradientProblem(30, 16, 32, 32);
  problem.mode = Mode::kEval;
  NetworkParams params = NetworkParams::Initialize(problem.config);
  const double initial = problem.LossAt(params);
  Optimizer sgd(OptimizerKind::kSgd, 0.05);
  for (int step = 0; step < 20; ++step) {
    sgd.Step(params, problem.AnalyticGradient(params));
  }
  EXPECT_LE(problem.LossAt(params), 0.5 * initial);
}

TEST(SplitValidationTest, SeededAndDisjoint) {
  testing::SynthSplit split =
      testing::BuildSynthSplit(SmallSynth(6, 20, 100), testing::DeskModel(0));
  auto [train, val] = SplitValidation(split.train, 0.1, 3);
  EXPECT_EQ(train.queries().size() + val.queries().size(),
            split.train.queries().size());
  std::set<std::string> ids;
  for (const auto& q : train.queries()) ids.insert(q.record.query_id);
  for (const auto& q : val.queries()) EXPECT_EQ(ids.count(q.record.query_id), 0u);
  EXPECT_GT(val.queries().size(), 0u);
  EXPECT_LT(val.queries().size(), 25u);
  auto [train2, val2] = SplitValidation(split.train, 0.1, 3);
  ASSERT_EQ(val2.queries().size(), val.queries().size());
  for (std::size_t i = 0; i < val.queries().size(); ++i) {
    EXPECT_EQ(val2.queries()[i].record.query_id, val.queries()[i].record.query_id);
  }
  auto [all, none] = SplitValidation(split.train, 0.0, 3);
  EXPECT_TRUE(none.queries().empty());
}

}  // namespace
}  // namespace mml
