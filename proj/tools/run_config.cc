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

#include "tools/run_config.h"

#include <cstdio>

#include "mml/config_io.h"
#include "mml/hashing.h"
#include "mml/status.h"

namespace mml::tools {

using nlohmann::json;

namespace {

void RejectNestedSeed(const json& section, const char* name) {
  if (section.is_object() && section.contains("seed")) {
    Fail(ErrorCode::kConfig, std::string("unknown key '") + name +
                                 ".seed' (use the top-level seed)");
  }
}

json WithoutKey(json section, const char* key) {
  if (section.is_object()) section.erase(key);
  return section;
}

}  // namespace

void ApplyOverride(json& doc, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    Fail(ErrorCode::kConfig,
         "override '" + std::string(assignment) + "' is not key=value");
  }
  const std::string key(assignment.substr(0, eq));
  const std::string text(assignment.substr(eq + 1));
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  json* node = &doc;
  std::size_t begin = 0;
  while (true) {
    const std::size_t dot = key.find('.', begin);
    const std::string part = key.substr(begin, dot - begin);
    if (part.empty()) Fail(ErrorCode::kConfig, "bad override key '" + key + "'");
    if (!node->is_object()) {
      Fail(ErrorCode::kConfig, "override '" + key + "' descends into a value");
    }
    if (dot == std::string::npos) {
      (*node)[part] = std::move(value);
      return;
    }
    node = &(*node)[part];
    if (node->is_null()) *node = json::object();
    begin = dot + 1;
  }
}

RunConfig ParseRunConfig(const json& doc) {
  RunConfig config;
  ObjectReader r(doc, "");
  r.Read("seed", config.seed);
  r.Read("parallelism", config.parallelism);
  if (config.parallelism < 1) {
    Fail(ErrorCode::kConfig, "parallelism must be >= 1");
  }

  if (r.Has("paths")) {
    ObjectReader p(r.Raw("paths"), "paths");
    p.Read("manifest", config.paths.manifest);
    p.Read("test_manifest", config.paths.test_manifest);
    if (p.Has("archives")) {
      const json& list = p.Raw("archives");
      if (!list.is_array()) {
        Fail(ErrorCode::kConfig, "paths.archives: expected an array of paths");
      }
      for (const json& item : list) {
        if (!item.is_string()) {
          Fail(ErrorCode::kConfig,
               "paths.archives: expected an array of paths");
        }
        config.paths.archives.push_back(item.get<std::string>());
      }
    }
    p.Read("output_dir", config.paths.output_dir);
    p.Read("checkpoint", config.paths.checkpoint);
    p.Read("predictions", config.paths.predictions);
    p.Read("sweep_results", config.paths.sweep_results);
    p.Finish();
  }

  r.Read("dims", config.dims);

  ModelConfig model;
  if (r.Has("model")) {
    const json& section = r.Raw("model");
    RejectNestedSeed(section, "model");
    if (section.is_object() && section.contains("preset")) {
      const json& preset = section.at("preset");
      if (!preset.is_string()) {
        Fail(ErrorCode::kConfig, "model.preset: expected a string");
      }
      config.model_preset = preset.get<std::string>();
      try {
        model = ModelPreset(config.model_preset);
      } catch (const Error& e) {
        Fail(ErrorCode::kConfig, std::string("model.preset: ") + e.what());
      }
    }
    if (section.is_object() && section.contains("dims")) {
      Fail(ErrorCode::kConfig, "unknown key 'model.dims' (use top-level dims)");
    }
    model.dims = config.dims;
    model.seed = MixSeed(config.seed, {0x30DE1});
    config.model = ModelConfigFromJson(WithoutKey(section, "preset"), model);
  } else {
    model.dims = config.dims;
    model.seed = MixSeed(config.seed, {0x30DE1});
    config.model = ModelConfigFromJson(json::object(), model);
  }

  TrainConfig train;
  train.seed = MixSeed(config.seed, {0x7EA1});
  if (r.Has("train")) {
    RejectNestedSeed(r.Raw("train"), "train");
    config.train = TrainConfigFromJson(r.Raw("train"), train);
  } else {
    config.train = train;
  }
  if (r.Has("proposals")) {
    config.proposals = ProposalConfigFromJson(r.Raw("proposals"));
  }
  if (r.Has("eval")) config.eval = EvalSpecFromJson(r.Raw("eval"));
  if (r.Has("sweep")) config.sweep = SweepGridFromJson(r.Raw("sweep"));

  SynthConfig synth;
  synth.seed = config.seed;
  if (r.Has("synth")) {
    RejectNestedSeed(r.Raw("synth"), "synth");
    config.synth = SynthConfigFromJson(r.Raw("synth"), synth);
  } else {
    config.synth = synth;
  }
  r.Finish();
  return config;
}

json ToJson(const RunConfig& config) {
  json archives = json::array();
  for (const std::string& a : config.paths.archives) archives.push_back(a);
  return {{"seed", config.seed},
          {"parallelism", config.parallelism},
          {"paths",
           {{"manifest", config.paths.manifest},
            {"test_manifest", config.paths.test_manifest},
            {"archives", archives},
            {"output_dir", config.paths.output_dir},
            {"checkpoint", config.paths.checkpoint},
            {"predictions", config.paths.predictions},
            {"sweep_results", config.paths.sweep_results}}},
          {"model_preset", config.model_preset},
          {"dims", mml::ToJson(config.dims)},
          {"model", mml::ToJson(config.model)},
          {"train", mml::ToJson(config.train)},
          {"proposals", mml::ToJson(config.proposals)},
          {"eval", mml::ToJson(config.eval)},
          {"sweep", mml::ToJson(config.sweep)},
          {"synth", mml::ToJson(config.synth)}};
}

std::string ConfigHash(const RunConfig& config) {
  json doc = ToJson(config);
  doc.erase("parallelism");
  doc["paths"].erase("output_dir");
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx",
                static_cast<unsigned long long>(Fnv1a64(doc.dump())));
  return buffer;
}

}  // namespace mml::tools
