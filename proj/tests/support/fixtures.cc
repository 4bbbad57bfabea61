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

#include "support/fixtures.h"

namespace mml::testing {

SynthSplit BuildSynthSplit(const SynthConfig& synth, const ModelConfig& model,
                           const ProposalConfig& proposals) {
  SynthSplit split;
  split.synth = GenerateSynth(synth);
  for (const TensorRecord& record : split.synth.records) split.store.Add(record);
  Manifest train{split.synth.videos, split.synth.train_queries};
  Manifest test{split.synth.videos, split.synth.test_queries};
  split.train =
      Dataset::Build(train, split.store, proposals, model.Selection());
  split.test = Dataset::Build(test, split.store, proposals, model.Selection());
  return split;
}

ModelConfig DeskModel(std::uint64_t seed, std::size_t common_dim,
                      std::size_t hidden_dim) {
  ModelConfig model = ModelPreset("model3");
  model.dims = SynthConfig::DefaultSynthDims();
  model.common_dim = common_dim;
  model.hidden_dim = hidden_dim;
  model.seed = seed;
  return model;
}

TrainConfig DeskTraining(std::uint64_t seed, int epochs) {
  TrainConfig train;
  train.optimizer = OptimizerKind::kAdam;
  train.learning_rate = 1e-3;
  train.epochs = epochs;
  train.seed = seed;
  return train;
}

std::filesystem::path ScratchDir(const std::string& name) {
  std::filesystem::path dir =
      std::filesystem::temp_directory_path() / ("mml_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace mml::testing
