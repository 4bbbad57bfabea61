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


#include <map>
#include <random>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "mml/dataset.h"
#include "mml/evaluation.h"
#include "mml/features.h"
#include "mml/manifest.h"
#include "mml/network.h"
#include "mml/proposals.h"
#include "mml/training.h"

namespace mml {
namespace {

std::vector<double> Gaussian(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = normal(rng);
  return v;
}

// Model 3 at full feature widths; common/hidden width from the range arg.
struct Problem {
  ModelConfig config;
  NetworkParams params;
  ClipFeatures clip;
  QueryFeatures query;

  explicit Problem(std::size_t width) {
    config = ModelPreset("model3");
    config.common_dim = width;
    config.hidden_dim = width;
    params = NetworkParams::Initialize(config);
    std::mt19937_64 rng(1);
    const EmbeddingDims& d = config.dims;
    clip.fc6 = Gaussian(d.Get(EmbeddingKind::kC3dFc6), rng);
    clip.vac = Gaussian(d.Get(EmbeddingKind::kVisualActivityConcepts), rng);
    clip.captioning = Gaussian(d.Get(EmbeddingKind::kVideoCaptioning), rng);
    clip.object = Gaussian(d.Get(EmbeddingKind::kObjectSegmentation), rng);
    query.sentence = Gaussian(d.Get(config.sentence_kind), rng);
    query.vo = Gaussian(d.Get(config.vo_kind), rng);
  }
};

void BM_Forward(benchmark::State& state) {
  Problem p(static_cast<std::size_t>(state.range(0)));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        Forward(p.params, p.config, p.clip, p.query, Mode::kTrain, ++seed));
  }
}
BENCHMARK(BM_Forward)->Arg(32)->Arg(256);

void BM_ForwardBackward(benchmark::State& state) {
  Problem p(static_cast<std::size_t>(state.range(0)));
  std::vector<ForwardTape> tapes(1);
  const std::vector<HeadGrad> grads = {{0.5, 0.1, -0.1}};
  std::uint64_t seed = 0;
  for (auto _ : state) {
    Forward(p.params, p.config, p.clip, p.query, Mode::kTrain, ++seed,
            &tapes[0]);
    benchmark::DoNotOptimize(Backward(p.params, tapes, grads));
  }
}
BENCHMARK(BM_ForwardBackward)->Arg(32)->Arg(256);

void BM_GenerateProposals(benchmark::State& state) {
  VideoMeta meta;
  meta.video_id = "v";
  meta.duration = static_cast<double>(state.range(0));
  meta.frame_rate = 30.0;
  const ProposalConfig config;
  for (auto _ : state) {
    benchmark::DoNotOptimize(GenerateProposals(meta, config));
  }
}
BENCHMARK(BM_GenerateProposals)->Arg(30)->Arg(600);

void BM_RecallAtN(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> t(0.0, 60.0);
  auto interval = [&] {
    double a = t(rng), b = t(rng);
    return a < b ? Interval{a, b} : Interval{b, a};
  };
  RankedIntervals preds;
  std::map<std::string, Interval> gts;
  for (int q = 0; q < state.range(0); ++q) {
    const std::string id = "q" + std::to_string(q);
    gts[id] = interval();
    for (int c = 0; c < 50; ++c) preds[id].push_back(interval());
  }
  const EvalSpec spec;
  for (auto _ : state) {
    benchmark::DoNotOptimize(RecallAtN(preds, gts, spec));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RecallAtN)->Arg(100)->Arg(4000);

void BM_ObjectPipeline(benchmark::State& state) {
  std::mt19937_64 rng(4);
  std::vector<std::vector<double>> means(static_cast<std::size_t>(state.range(0)));
  for (auto& m : means) m = Gaussian(kObjectClasses, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(NormalizeAndScale(TemporalMaxPool(means), 0.005));
  }
}
BENCHMARK(BM_ObjectPipeline)->Arg(8)->Arg(64);

}  // namespace
}  // namespace mml

BENCHMARK_MAIN();
