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

#include "mml/config_io.h"

#include <utility>

#include "mml/status.h"

namespace mml {

using nlohmann::json;

namespace {

[[noreturn]] void TypeError(const std::string& path, const char* expected) {
  Fail(ErrorCode::kConfig, path + ": expected " + expected);
}

template <typename Config, typename Fn>
Config Validated(Config config, const std::string& path, Fn&& validate) {
  try {
    validate(config);
  } catch (const Error& e) {
    Fail(ErrorCode::kConfig, path + ": " + e.what());
  }
  return config;
}

}  // namespace

ObjectReader::ObjectReader(const json& object, std::string path)
    : object_(object), path_(std::move(path)) {
  if (!object_.is_object()) TypeError(path_, "an object");
}

std::string ObjectReader::KeyPath(std::string_view key) const {
  return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
}

bool ObjectReader::Has(std::string_view key) const {
  return object_.find(key) != object_.end();
}

const json* ObjectReader::Find(std::string_view key) {
  auto it = object_.find(key);
  if (it == object_.end()) return nullptr;
  consumed_.emplace(key);
  return &*it;
}

const json& ObjectReader::Raw(std::string_view key) {
  const json* value = Find(key);
  if (value == nullptr) {
    Fail(ErrorCode::kConfig, "missing key '" + KeyPath(key) + "'");
  }
  return *value;
}

void ObjectReader::Read(std::string_view key, double& out) {
  if (const json* v = Find(key)) {
    if (!v->is_number()) TypeError(KeyPath(key), "a number");
    out = v->get<double>();
  }
}

void ObjectReader::Read(std::string_view key, int& out) {
  if (const json* v = Find(key)) {
    if (!v->is_number_integer()) TypeError(KeyPath(key), "an integer");
    out = v->get<int>();
  }
}

void ObjectReader::UnsignedError(std::string_view key) const {
  TypeError(KeyPath(key), "a non-negative integer");
}

void ObjectReader::Read(std::string_view key, bool& out) {
  if (const json* v = Find(key)) {
    if (!v->is_boolean()) TypeError(KeyPath(key), "a boolean");
    out = v->get<bool>();
  }
}

void ObjectReader::Read(std::string_view key, std::string& out) {
  if (const json* v = Find(key)) {
    if (!v->is_string()) TypeError(KeyPath(key), "a string");
    out = v->get<std::string>();
  }
}

void ObjectReader::Read(std::string_view key, std::vector<double>& out) {
  if (const json* v = Find(key)) {
    if (!v->is_array()) TypeError(KeyPath(key), "an array of numbers");
    std::vector<double> values;
    for (const json& x : *v) {
      if (!x.is_number()) TypeError(KeyPath(key), "an array of numbers");
      values.push_back(x.get<double>());
    }
    out = std::move(values);
  }
}

void ObjectReader::Read(std::string_view key, std::vector<int>& out) {
  if (const json* v = Find(key)) {
    if (!v->is_array()) TypeError(KeyPath(key), "an array of integers");
    std::vector<int> values;
    for (const json& x : *v) {
      if (!x.is_number_integer()) {
        TypeError(KeyPath(key), "an array of integers");
      }
      values.push_back(x.get<int>());
    }
    out = std::move(values);
  }
}

namespace {

EmbeddingKind KindFromJson(const json& v, const std::string& path) {
  if (!v.is_string()) TypeError(path, "an embedding kind name");
  auto kind = ParseKind(v.get<std::string>());
  if (!kind) {
    Fail(ErrorCode::kConfig,
         path + ": unknown embedding kind '" + v.get<std::string>() + "'");
  }
  return *kind;
}

}  // namespace

void ObjectReader::Read(std::string_view key, EmbeddingKind& out) {
  if (const json* v = Find(key)) out = KindFromJson(*v, KeyPath(key));
}

void ObjectReader::Read(std::string_view key, std::set<EmbeddingKind>& out) {
  if (const json* v = Find(key)) {
    if (!v->is_array()) TypeError(KeyPath(key), "an array of kind names");
    std::set<EmbeddingKind> kinds;
    for (const json& x : *v) kinds.insert(KindFromJson(x, KeyPath(key)));
    out = std::move(kinds);
  }
}

void ObjectReader::Read(std::string_view key, EmbeddingDims& out) {
  if (const json* v = Find(key)) {
    if (!v->is_object()) TypeError(KeyPath(key), "an object of widths");
    EmbeddingDims dims = out;
    for (const auto& [name, width] : v->items()) {
      const std::string path = KeyPath(key) + "." + name;
      auto kind = ParseKind(name);
      if (!kind) Fail(ErrorCode::kConfig, "unknown key '" + path + "'");
      if (!width.is_number_unsigned() || width.get<std::size_t>() == 0) {
        TypeError(path, "a positive integer");
      }
      try {
        dims.Override(*kind, width.get<std::size_t>());
      } catch (const Error& e) {
        Fail(ErrorCode::kConfig, path + ": " + e.what());
      }
    }
    out = std::move(dims);
  }
}

void ObjectReader::Read(std::string_view key, OptimizerKind& out) {
  if (const json* v = Find(key)) {
    const std::string name = v->is_string() ? v->get<std::string>() : "";
    if (name == "sgd") {
      out = OptimizerKind::kSgd;
    } else if (name == "adam") {
      out = OptimizerKind::kAdam;
    } else {
      TypeError(KeyPath(key), "\"sgd\" or \"adam\"");
    }
  }
}

void ObjectReader::Finish() const {
  for (const auto& [key, value] : object_.items()) {
    if (!consumed_.contains(key)) {
      Fail(ErrorCode::kConfig, "unknown key '" + KeyPath(key) + "'");
    }
  }
}

std::string_view OptimizerName(OptimizerKind kind) {
  return kind == OptimizerKind::kAdam ? "adam" : "sgd";
}

json ToJson(const EmbeddingDims& dims) {
  json out = json::object();
  for (const auto& [kind, width] : dims.overrides()) {
    out[std::string(KindName(kind))] = width;
  }
  return out;
}

json ToJson(const HighLevelFusionConfig& config) {
  return {{"s_obj", config.s_obj},
          {"d_obj", config.d_obj},
          {"d_vac", config.d_vac}};
}

json ToJson(const ModelConfig& config) {
  return {{"sentence_kind", std::string(KindName(config.sentence_kind))},
          {"vo_kind", std::string(KindName(config.vo_kind))},
          {"use_object_features", config.use_object_features},
          {"use_captioning_features", config.use_captioning_features},
          {"common_dim", config.common_dim},
          {"hidden_dim", config.hidden_dim},
          {"fusion", ToJson(config.fusion)},
          {"s_cap", config.s_cap},
          {"seed", config.seed},
          {"dims", ToJson(config.dims)}};
}

json ToJson(const TrainConfig& config) {
  return {{"positive_iou_threshold", config.positive_iou_threshold},
          {"negatives_per_positive", config.negatives_per_positive},
          {"lambda_reg", config.lambda_reg},
          {"learning_rate", config.learning_rate},
          {"batch_size", config.batch_size},
          {"epochs", config.epochs},
          {"seed", config.seed},
          {"optimizer", std::string(OptimizerName(config.optimizer))},
          {"validation_fraction", config.validation_fraction}};
}

json ToJson(const ProposalConfig& config) {
  return {{"window_lengths", config.window_lengths},
          {"overlap_ratio", config.overlap_ratio}};
}

json ToJson(const EvalSpec& spec) {
  return {{"n_values", spec.n_values},
          {"iou_threshold", spec.iou_threshold},
          {"nms_threshold", spec.nms_threshold}};
}

json ToJson(const SweepGrid& grid) {
  return {{"s_obj_values", grid.s_obj_values},
          {"d_obj_values", grid.d_obj_values},
          {"d_vac_values", grid.d_vac_values}};
}

json ToJson(const SynthConfig& config) {
  json kinds = json::array();
  for (EmbeddingKind kind : config.signal_kinds) {
    kinds.push_back(std::string(KindName(kind)));
  }
  return {{"n_videos", config.n_videos},
          {"n_queries", config.n_queries},
          {"min_duration", config.min_duration},
          {"max_duration", config.max_duration},
          {"frame_rate", config.frame_rate},
          {"min_gt_length", config.min_gt_length},
          {"max_gt_length", config.max_gt_length},
          {"n_verbs", config.n_verbs},
          {"n_objects", config.n_objects},
          {"signal_strength", config.signal_strength},
          {"noise_sigma", config.noise_sigma},
          {"dense_noise_sigma", config.dense_noise_sigma
                                    ? json(*config.dense_noise_sigma)
                                    : json(nullptr)},
          {"signal_kinds", kinds},
          {"test_fraction", config.test_fraction},
          {"sentence_kind", std::string(KindName(config.sentence_kind))},
          {"vo_kind", std::string(KindName(config.vo_kind))},
          {"dims", ToJson(config.dims)},
          {"raw_map_side", config.raw_map_side},
          {"emit_actionness", config.emit_actionness},
          {"seed", config.seed}};
}

HighLevelFusionConfig FusionConfigFromJson(const json& j,
                                           HighLevelFusionConfig base,
                                           const std::string& path) {
  ObjectReader r(j, path);
  r.Read("s_obj", base.s_obj);
  r.Read("d_obj", base.d_obj);
  r.Read("d_vac", base.d_vac);
  r.Finish();
  return Validated(base, path, [](const auto& c) { c.Validate(); });
}

ModelConfig ModelConfigFromJson(const json& j, ModelConfig base,
                                const std::string& path) {
  ObjectReader r(j, path);
  r.Read("sentence_kind", base.sentence_kind);
  r.Read("vo_kind", base.vo_kind);
  r.Read("use_object_features", base.use_object_features);
  r.Read("use_captioning_features", base.use_captioning_features);
  r.Read("common_dim", base.common_dim);
  r.Read("hidden_dim", base.hidden_dim);
  if (r.Has("fusion")) {
    base.fusion =
        FusionConfigFromJson(r.Raw("fusion"), base.fusion, r.KeyPath("fusion"));
  }
  r.Read("s_cap", base.s_cap);
  r.Read("seed", base.seed);
  r.Read("dims", base.dims);
  r.Finish();
  return Validated(base, path, [](const auto& c) { c.Validate(); });
}

TrainConfig TrainConfigFromJson(const json& j, TrainConfig base,
                                const std::string& path) {
  ObjectReader r(j, path);
  r.Read("positive_iou_threshold", base.positive_iou_threshold);
  r.Read("negatives_per_positive", base.negatives_per_positive);
  r.Read("lambda_reg", base.lambda_reg);
  r.Read("learning_rate", base.learning_rate);
  r.Read("batch_size", base.batch_size);
  r.Read("epochs", base.epochs);
  r.Read("seed", base.seed);
  r.Read("optimizer", base.optimizer);
  r.Read("validation_fraction", base.validation_fraction);
  r.Finish();
  return Validated(base, path, [](const auto& c) { c.Validate(); });
}

ProposalConfig ProposalConfigFromJson(const json& j, ProposalConfig base,
                                      const std::string& path) {
  ObjectReader r(j, path);
  r.Read("window_lengths", base.window_lengths);
  r.Read("overlap_ratio", base.overlap_ratio);
  r.Finish();
  return Validated(base, path, [](const auto& c) { c.Validate(); });
}

EvalSpec EvalSpecFromJson(const json& j, EvalSpec base,
                          const std::string& path) {
  ObjectReader r(j, path);
  r.Read("n_values", base.n_values);
  r.Read("iou_threshold", base.iou_threshold);
  r.Read("nms_threshold", base.nms_threshold);
  r.Finish();
  return Validated(base, path, [](const auto& c) { c.Validate(); });
}

SweepGrid SweepGridFromJson(const json& j, SweepGrid base,
                            const std::string& path) {
  ObjectReader r(j, path);
  r.Read("s_obj_values", base.s_obj_values);
  r.Read("d_obj_values", base.d_obj_values);
  r.Read("d_vac_values", base.d_vac_values);
  r.Finish();
  return Validated(base, path, [](const SweepGrid& grid) {
    if (grid.s_obj_values.empty() || grid.d_obj_values.empty() ||
        grid.d_vac_values.empty()) {
      Fail(ErrorCode::kInvalidArgument, "grid axes must be non-empty");
    }
    for (const HighLevelFusionConfig& c : EnumerateGrid(grid)) c.Validate();
  });
}

SynthConfig SynthConfigFromJson(const json& j, SynthConfig base,
                                const std::string& path) {
  ObjectReader r(j, path);
  r.Read("n_videos", base.n_videos);
  r.Read("n_queries", base.n_queries);
  r.Read("min_duration", base.min_duration);
  r.Read("max_duration", base.max_duration);
  r.Read("frame_rate", base.frame_rate);
  r.Read("min_gt_length", base.min_gt_length);
  r.Read("max_gt_length", base.max_gt_length);
  r.Read("n_verbs", base.n_verbs);
  r.Read("n_objects", base.n_objects);
  r.Read("signal_strength", base.signal_strength);
  r.Read("noise_sigma", base.noise_sigma);
  if (r.Has("dense_noise_sigma")) {
    const json& v = r.Raw("dense_noise_sigma");
    if (v.is_null()) {
      base.dense_noise_sigma.reset();
    } else if (v.is_number()) {
      base.dense_noise_sigma = v.get<double>();
    } else {
      TypeError(r.KeyPath("dense_noise_sigma"), "a number or null");
    }
  }
  r.Read("signal_kinds", base.signal_kinds);
  r.Read("test_fraction", base.test_fraction);
  r.Read("sentence_kind", base.sentence_kind);
  r.Read("vo_kind", base.vo_kind);
  r.Read("dims", base.dims);
  r.Read("raw_map_side", base.raw_map_side);
  r.Read("emit_actionness", base.emit_actionness);
  r.Read("seed", base.seed);
  r.Finish();
  return Validated(base, path, [](const auto& c) { c.Validate(); });
}

}  // namespace mml
