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

// Declarative run configuration of the mml tool.
//
//   {
//     "seed": 0,
//     "parallelism": 1,
//     "paths": {"manifest": "...", "test_manifest": "...",
//               "archives": ["..."], "output_dir": "runs",
//               "checkpoint": "...", "predictions": "...",
//               "sweep_results": "..."},
//     "dims": {"sentence_bert": 768},
//     "model": {"preset": "model3", "common_dim": 256},
//     "train": {...}, "proposals": {...}, "eval": {...},
//     "sweep": {...}, "synth": {...}
//   }
//
// Every section is optional. Nested sections may not carry their own seed;
// the top-level seed derives them.

#ifndef MML_TOOLS_RUN_CONFIG_H_
#define MML_TOOLS_RUN_CONFIG_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "mml/embedding.h"
#include "mml/evaluation.h"
#include "mml/network.h"
#include "mml/proposals.h"
#include "mml/sweep.h"
#include "mml/synth.h"
#include "mml/training.h"

namespace mml::tools {

struct RunPaths {
  std::string manifest;
  std::string test_manifest;
  std::vector<std::string> archives;
  std::string output_dir = "runs";
  std::string checkpoint;
  std::string predictions;
  std::string sweep_results;
};

struct RunConfig {
  std::uint64_t seed = 0;
  int parallelism = 1;
  RunPaths paths;
  std::string model_preset;  // empty = ModelConfig defaults
  EmbeddingDims dims;
  ModelConfig model;
  TrainConfig train;
  ProposalConfig proposals;
  EvalSpec eval;
  SweepGrid sweep;
  SynthConfig synth;
};

// Applies "a.b.c=value" to `doc`. The value is parsed as JSON when
// possible and kept as a string otherwise.
void ApplyOverride(nlohmann::json& doc, std::string_view assignment);

// Resolves a config document; relative paths are kept as written.
RunConfig ParseRunConfig(const nlohmann::json& doc);

nlohmann::json ToJson(const RunConfig& config);

// 16 hex digits of FNV-1a over the canonical JSON form, excluding
// parallelism and output_dir.
std::string ConfigHash(const RunConfig& config);

}  // namespace mml::tools

#endif  // MML_TOOLS_RUN_CONFIG_H_
