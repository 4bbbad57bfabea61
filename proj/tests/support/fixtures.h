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

// Shared synthetic fixtures.

#ifndef MML_TESTS_SUPPORT_FIXTURES_H_
#define MML_TESTS_SUPPORT_FIXTURES_H_

#include <filesystem>
#include <string>

#include "mml/dataset.h"
#include "mml/network.h"
#include "mml/synth.h"
#include "mml/training.h"

namespace mml::testing {

struct SynthSplit {
  SynthDataset synth;
  FeatureStore store;
  Dataset train;
  Dataset test;
};

SynthSplit BuildSynthSplit(const SynthConfig& synth, const ModelConfig& model,
                           const ProposalConfig& proposals = {});

// Model-3 toggles at desk widths matching SynthConfig::DefaultSynthDims().
ModelConfig DeskModel(std::uint64_t seed, std::size_t common_dim = 32,
                      std::size_t hidden_dim = 64);

// Adam settings used for the synthetic end-to-end runs.
TrainConfig DeskTraining(std::uint64_t seed, int epochs);

// Fresh empty directory under the system temp dir.
std::filesystem::path ScratchDir(const std::string& name);

}  // namespace mml::testing

#endif  // MML_TESTS_SUPPORT_FIXTURES_H_
