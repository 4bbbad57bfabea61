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

// JSON forms of the configuration structs. Readers reject unknown keys
// and wrong types with kConfig; keys that are absent keep the value of
// the `base` argument.

#ifndef MML_CONFIG_IO_H_
#define MML_CONFIG_IO_H_

#include <concepts>
#include <cstdint>
#include <set>
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

namespace mml {

// Strict reader over one JSON object. `path` prefixes error messages.
class ObjectReader {
 public:
  ObjectReader(const nlohmann::json& object, std::string path);

  bool Has(std::string_view key) const;
  const nlohmann::json& Raw(std::string_view key);

  void Read(std::string_view key, double& out);
  void Read(std::string_view key, int& out);
  template <std::unsigned_integral T>
  void Read(std::string_view key, T& out) {
    if (const nlohmann::json* v = Find(key)) {
      if (!v->is_number_unsigned()) UnsignedError(key);
      out = v->get<T>();
    }
  }
  void Read(std::string_view key, bool& out);
  void Read(std::string_view key, std::string& out);
  void Read(std::string_view key, std::vector<double>& out);
  void Read(std::string_view key, std::vector<int>& out);
  void Read(std::string_view key, EmbeddingKind& out);
  void Read(std::string_view key, std::set<EmbeddingKind>& out);
  void Read(std::string_view key, EmbeddingDims& out);
  void Read(std::string_view key, OptimizerKind& out);

  // Throws on keys nobody read.
  void Finish() const;

  std::string KeyPath(std::string_view key) const;

 private:
  const nlohmann::json* Find(std::string_view key);
  [[noreturn]] void UnsignedError(std::string_view key) const;

  const nlohmann::json& object_;
  std::string path_;
  std::set<std::string, std::less<>> consumed_;
};

nlohmann::json ToJson(const EmbeddingDims& dims);
nlohmann::json ToJson(const HighLevelFusionConfig& config);
nlohmann::json ToJson(const ModelConfig& config);
nlohmann::json ToJson(const TrainConfig& config);
nlohmann::json ToJson(const ProposalConfig& config);
nlohmann::json ToJson(const EvalSpec& spec);
nlohmann::json ToJson(const SweepGrid& grid);
nlohmann::json ToJson(const SynthConfig& config);

// Each reader validates the result and reports failures as kConfig.
HighLevelFusionConfig FusionConfigFromJson(const nlohmann::json& j,
                                           HighLevelFusionConfig base = {},
                                           const std::string& path = "fusion");
ModelConfig ModelConfigFromJson(const nlohmann::json& j, ModelConfig base = {},
                                const std::string& path = "model");
TrainConfig TrainConfigFromJson(const nlohmann::json& j, TrainConfig base = {},
                                const std::string& path = "train");
ProposalConfig ProposalConfigFromJson(const nlohmann::json& j,
                                      ProposalConfig base = {},
                                      const std::string& path = "proposals");
EvalSpec EvalSpecFromJson(const nlohmann::json& j, EvalSpec base = {},
                          const std::string& path = "eval");
SweepGrid SweepGridFromJson(const nlohmann::json& j, SweepGrid base = {},
                            const std::string& path = "sweep");
SynthConfig SynthConfigFromJson(const nlohmann::json& j, SynthConfig base = {},
                                const std::string& path = "synth");

std::string_view OptimizerName(OptimizerKind kind);

}  // namespace mml

#endif  // MML_CONFIG_IO_H_
