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

#include "mml/network.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <random>

#include <nlohmann/json.hpp>

#include "mml/archive.h"
#include "mml/config_io.h"
#include "mml/hashing.h"
#include "mml/status.h"

namespace mml {
namespace {

std::atomic<std::uint64_t> g_next_stamp{1};

Linear MakeLinear(std::size_t out, std::size_t in) {
  return {RowMatrix::Zero(static_cast<Eigen::Index>(out),
                          static_cast<Eigen::Index>(in)),
          Eigen::VectorXd::Zero(static_cast<Eigen::Index>(out))};
}

Eigen::VectorXd ToEigen(std::span<const double> v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(),
                                           static_cast<Eigen::Index>(v.size()));
}

Eigen::VectorXd Activate(const Linear& layer, const Eigen::VectorXd& x) {
  return (layer.weight * x + layer.bias).array().tanh().matrix();
}

void RequireFeature(const std::vector<double>& values, EmbeddingKind kind,
                    std::size_t dim) {
  if (values.empty()) {
    Fail(ErrorCode::kNotFound,
         "missing feature '" + std::string(KindName(kind)) + "'");
  }
  if (values.size() != dim) {
    Fail(ErrorCode::kDimMismatch,
         "feature '" + std::string(KindName(kind)) + "' has " +
             std::to_string(values.size()) + " values, expected " +
             std::to_string(dim));
  }
}

// MPU of two equal-length activations written into z at `offset`.
void Fuse(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
          Eigen::VectorXd& z, Eigen::Index offset) {
  const Eigen::Index d = a.size();
  z.segment(offset, d) = a + b;
  z.segment(offset + d, d) = a.cwiseProduct(b);
  z.segment(offset + 2 * d, d) = a;
  z.segment(offset + 3 * d, d) = b;
}

// Gradients w.r.t. the two MPU inputs given d(loss)/d(fused segment).
void FuseBackward(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                  const Eigen::VectorXd& dz, Eigen::Index offset,
                  Eigen::VectorXd& da, Eigen::VectorXd& db) {
  const Eigen::Index d = a.size();
  auto d_sum = dz.segment(offset, d);
  auto d_prod = dz.segment(offset + d, d);
  da = d_sum + d_prod.cwiseProduct(b) + dz.segment(offset + 2 * d, d);
  db = d_sum + d_prod.cwiseProduct(a) + dz.segment(offset + 3 * d, d);
}

void AccumulateLayer(Linear& grad, const Eigen::VectorXd& activation,
                     const Eigen::VectorXd& d_activation,
                     const Eigen::VectorXd& input) {
  Eigen::VectorXd d_pre =
      d_activation.cwiseProduct((1.0 - activation.array().square()).matrix());
  grad.weight.noalias() += d_pre * input.transpose();
  grad.bias += d_pre;
}

template <typename Params, typename T>
std::vector<ParamTensor<T>> CollectTensors(Params& params) {
  std::vector<ParamTensor<T>> tensors;
  auto add = [&](const char* name, auto& layer) {
    auto& w = layer.weight;
    auto& b = layer.bias;
    tensors.push_back({std::string(name) + ".weight",
                       {static_cast<std::uint32_t>(w.rows()),
                        static_cast<std::uint32_t>(w.cols())},
                       std::span<T>(w.data(), static_cast<std::size_t>(w.size()))});
    tensors.push_back({std::string(name) + ".bias",
                       {static_cast<std::uint32_t>(b.size())},
                       std::span<T>(b.data(), static_cast<std::size_t>(b.size()))});
  };
  add("low_visual", params.low_visual);
  add("sentence", params.sentence);
  add("high_visual", params.high_visual);
  add("vo", params.vo);
  add("hidden", params.hidden);
  add("output", params.output);
  return tensors;
}

}  // namespace

std::vector<double> MpuFuse(std::span<const double> v,
                            std::span<const double> s) {
  if (v.size() != s.size()) {
    Fail(ErrorCode::kDimMismatch, "MPU inputs must have equal dimensions");
  }
  const std::size_t d = v.size();
  std::vector<double> out(4 * d);
  for (std::size_t i = 0; i < d; ++i) {
    out[i] = v[i] + s[i];
    out[d + i] = v[i] * s[i];
    out[2 * d + i] = v[i];
    out[3 * d + i] = s[i];
  }
  return out;
}

void ModelConfig::Validate() const {
  if (!IsSentenceKind(sentence_kind)) {
    Fail(ErrorCode::kInvalidArgument,
         std::string(KindName(sentence_kind)) + " is not a sentence kind");
  }
  if (!IsVoKind(vo_kind)) {
    Fail(ErrorCode::kInvalidArgument,
         std::string(KindName(vo_kind)) + " is not a VO kind");
  }
  if (common_dim == 0 || hidden_dim == 0) {
    Fail(ErrorCode::kInvalidArgument, "layer widths must be positive");
  }
  fusion.Validate();
  if (!(s_cap >= 0.0 && s_cap <= 1.0)) {
    Fail(ErrorCode::kInvalidArgument, "s_cap must lie in [0, 1]");
  }
}

std::size_t ModelConfig::LowInputDim() const {
  return dims.Get(EmbeddingKind::kC3dFc6) +
         dims.Get(EmbeddingKind::kVideoCaptioning);
}

std::size_t ModelConfig::HighInputDim() const {
  return kObjectClasses + dims.Get(EmbeddingKind::kVisualActivityConcepts);
}

FeatureSelection ModelConfig::Selection() const {
  return {sentence_kind, vo_kind, use_object_features,
          use_captioning_features, dims};
}

ModelConfig ModelPreset(std::string_view name) {
  struct Row {
    const char* name;
    EmbeddingKind sentence;
    EmbeddingKind vo;
    bool object;
    bool captioning;
  };
  static constexpr Row kRows[] = {
      {"mac", EmbeddingKind::kSentenceSkipthought, EmbeddingKind::kVoGlove,
       false, false},
      {"model1", EmbeddingKind::kSentenceBert, EmbeddingKind::kVoGlove, false,
       false},
      {"model2", EmbeddingKind::kSentenceSkipthought, EmbeddingKind::kVoGlove,
       true, false},
      {"model3", EmbeddingKind::kSentenceBert, EmbeddingKind::kVoGlove, true,
       false},
      {"model4", EmbeddingKind::kSentenceSkipthought, EmbeddingKind::kVoBert,
       true, false},
      {"model5", EmbeddingKind::kSentenceBert, EmbeddingKind::kVoBert, true,
       false},
      {"model6", EmbeddingKind::kSentenceRoberta, EmbeddingKind::kVoGlove,
       true, false},
      {"model7", EmbeddingKind::kSentenceBert, EmbeddingKind::kVoGlove, true,
       true},
  };
  for (const Row& row : kRows) {
    if (name == row.name) {
      ModelConfig config;
      config.sentence_kind = row.sentence;
      config.vo_kind = row.vo;
      config.use_object_features = row.object;
      config.use_captioning_features = row.captioning;
      return config;
    }
  }
  Fail(ErrorCode::kInvalidArgument,
       "unknown model preset '" + std::string(name) + "'");
}

std::vector<std::string> ModelPresetNames() {
  return {"mac",    "model1", "model2", "model3",
          "model4", "model5", "model6", "model7"};
}

NetworkParams NetworkParams::Zeros(const ModelConfig& config) {
  config.Validate();
  const std::size_t d = config.common_dim;
  const EmbeddingDims& dims = config.dims;
  NetworkParams params;
  params.low_visual = MakeLinear(d, config.LowInputDim());
  params.sentence = MakeLinear(d, dims.Get(config.sentence_kind));
  params.high_visual = MakeLinear(d, config.HighInputDim());
  params.vo = MakeLinear(d, dims.Get(config.vo_kind));
  params.hidden = MakeLinear(config.hidden_dim, 8 * d);
  params.output = MakeLinear(3, config.hidden_dim);
  params.Touch();
  return params;
}

NetworkParams NetworkParams::Initialize(const ModelConfig& config) {
  NetworkParams params = Zeros(config);
  std::mt19937_64 rng(MixSeed(config.seed, {0x1A17}));
  for (auto& tensor : params.Tensors()) {
    if (tensor.shape.size() != 2) continue;
    const double limit = std::sqrt(
        6.0 / static_cast<double>(tensor.shape[0] + tensor.shape[1]));
    for (double& w : tensor.values) {
      w = (2.0 * ToUnitDouble(rng()) - 1.0) * limit;
    }
  }
  params.Touch();
  return params;
}

std::vector<ParamTensor<double>> NetworkParams::Tensors() {
  return CollectTensors<NetworkParams, double>(*this);
}

std::vector<ParamTensor<const double>> NetworkParams::Tensors() const {
  return CollectTensors<const NetworkParams, const double>(*this);
}

std::size_t NetworkParams::ParameterCount() const {
  std::size_t n = 0;
  for (const auto& tensor : Tensors()) n += tensor.values.size();
  return n;
}

bool NetworkParams::AllFinite() const {
  for (const auto& tensor : Tensors()) {
    for (double v : tensor.values) {
      if (!std::isfinite(v)) return false;
    }
  }
  return true;
}

void NetworkParams::Touch() { stamp_ = g_next_stamp.fetch_add(1); }

NetworkParams& NetworkParams::operator+=(const NetworkParams& other) {
  auto mine = Tensors();
  auto theirs = other.Tensors();
  for (std::size_t t = 0; t < mine.size(); ++t) {
    if (mine[t].values.size() != theirs[t].values.size()) {
      Fail(ErrorCode::kDimMismatch, "parameter shapes differ");
    }
    for (std::size_t i = 0; i < mine[t].values.size(); ++i) {
      mine[t].values[i] += theirs[t].values[i];
    }
  }
  Touch();
  return *this;
}

NetworkParams& NetworkParams::operator*=(double factor) {
  for (auto& tensor : Tensors()) {
    for (double& v : tensor.values) v *= factor;
  }
  Touch();
  return *this;
}

HeadOutput Forward(const NetworkParams& params, const ModelConfig& config,
                   const ClipFeatures& clip, const QueryFeatures& query,
                   Mode mode, std::uint64_t seed, ForwardTape* tape) {
  const EmbeddingDims& dims = config.dims;
  RequireFeature(clip.fc6, EmbeddingKind::kC3dFc6,
                 dims.Get(EmbeddingKind::kC3dFc6));
  RequireFeature(clip.vac, EmbeddingKind::kVisualActivityConcepts,
                 dims.Get(EmbeddingKind::kVisualActivityConcepts));
  RequireFeature(query.sentence, config.sentence_kind,
                 dims.Get(config.sentence_kind));
  RequireFeature(query.vo, config.vo_kind, dims.Get(config.vo_kind));

  const std::size_t cap_dim = dims.Get(EmbeddingKind::kVideoCaptioning);
  std::vector<double> x_low;
  if (config.use_captioning_features) {
    RequireFeature(clip.captioning, EmbeddingKind::kVideoCaptioning, cap_dim);
    x_low = BuildLowInput(clip.fc6, clip.captioning, config.s_cap);
  } else {
    x_low = BuildLowInput(clip.fc6, std::vector<double>(cap_dim, 0.0),
                          config.s_cap);
  }

  ObjectFeature object;
  if (config.use_object_features) {
    RequireFeature(clip.object, EmbeddingKind::kObjectSegmentation,
                   kObjectClasses);
    object.v_obj = clip.object;
  } else {
    object.v_obj.assign(kObjectClasses, 0.0);
  }
  std::vector<double> x_high = BuildMlpHighInput(
      object, ActivityConceptFeature{clip.vac}, config.fusion, mode, seed);

  ForwardTape local;
  ForwardTape& t = tape ? *tape : local;
  t.x_low = ToEigen(x_low);
  t.x_sent = ToEigen(query.sentence);
  t.x_high = ToEigen(x_high);
  t.x_vo = ToEigen(query.vo);
  if (t.x_low.size() != params.low_visual.weight.cols() ||
      t.x_sent.size() != params.sentence.weight.cols() ||
      t.x_high.size() != params.high_visual.weight.cols() ||
      t.x_vo.size() != params.vo.weight.cols() ||
      params.low_visual.weight.rows() !=
          static_cast<Eigen::Index>(config.common_dim) ||
      params.hidden.weight.rows() !=
          static_cast<Eigen::Index>(config.hidden_dim)) {
    Fail(ErrorCode::kDimMismatch, "parameters do not match the model config");
  }
  t.a_low = Activate(params.low_visual, t.x_low);
  t.a_sent = Activate(params.sentence, t.x_sent);
  t.a_high = Activate(params.high_visual, t.x_high);
  t.a_vo = Activate(params.vo, t.x_vo);

  const Eigen::Index d = t.a_low.size();
  t.z.resize(8 * d);
  Fuse(t.a_low, t.a_sent, t.z, 0);
  Fuse(t.a_high, t.a_vo, t.z, 4 * d);
  t.h = Activate(params.hidden, t.z);
  Eigen::VectorXd out = params.output.weight * t.h + params.output.bias;
  t.recorded = true;
  t.params_stamp = params.stamp();
  return {out[0], out[1], out[2]};
}

NetworkParams Backward(const NetworkParams& params,
                       std::span<const ForwardTape> tapes,
                       std::span<const HeadGrad> grads) {
  if (tapes.size() != grads.size()) {
    Fail(ErrorCode::kInvalidArgument,
         "backward needs one head gradient per forward tape");
  }
  NetworkParams g;
  auto zero_like = [](const Linear& layer) {
    return MakeLinear(static_cast<std::size_t>(layer.weight.rows()),
                      static_cast<std::size_t>(layer.weight.cols()));
  };
  g.low_visual = zero_like(params.low_visual);
  g.sentence = zero_like(params.sentence);
  g.high_visual = zero_like(params.high_visual);
  g.vo = zero_like(params.vo);
  g.hidden = zero_like(params.hidden);
  g.output = zero_like(params.output);

  Eigen::VectorXd da, db;
  for (std::size_t i = 0; i < tapes.size(); ++i) {
    const ForwardTape& t = tapes[i];
    if (!t.recorded) {
      Fail(ErrorCode::kStaleTape, "backward without a recorded forward pass");
    }
    if (t.params_stamp != params.stamp()) {
      Fail(ErrorCode::kStaleTape,
           "forward record is stale: parameters changed since it was taken");
    }
    Eigen::Vector3d d_out(grads[i].d_score, grads[i].d_start, grads[i].d_end);
    g.output.weight.noalias() += d_out * t.h.transpose();
    g.output.bias += d_out;
    Eigen::VectorXd d_h = params.output.weight.transpose() * d_out;
    Eigen::VectorXd d_pre_h =
        d_h.cwiseProduct((1.0 - t.h.array().square()).matrix());
    g.hidden.weight.noalias() += d_pre_h * t.z.transpose();
    g.hidden.bias += d_pre_h;
    Eigen::VectorXd d_z = params.hidden.weight.transpose() * d_pre_h;

    const Eigen::Index d = t.a_low.size();
    FuseBackward(t.a_low, t.a_sent, d_z, 0, da, db);
    AccumulateLayer(g.low_visual, t.a_low, da, t.x_low);
    AccumulateLayer(g.sentence, t.a_sent, db, t.x_sent);
    FuseBackward(t.a_high, t.a_vo, d_z, 4 * d, da, db);
    AccumulateLayer(g.high_visual, t.a_high, da, t.x_high);
    AccumulateLayer(g.vo, t.a_vo, db, t.x_vo);
  }
  g.Touch();
  return g;
}

void RankPredictions(std::vector<PredictionRecord>& predictions) {
  std::stable_sort(predictions.begin(), predictions.end(),
                   [](const PredictionRecord& a, const PredictionRecord& b) {
                     if (a.weighted_score != b.weighted_score) {
                       return a.weighted_score > b.weighted_score;
                     }
                     if (a.clip.bounds.start != b.clip.bounds.start) {
                       return a.clip.bounds.start < b.clip.bounds.start;
                     }
                     return a.clip.scale_index < b.clip.scale_index;
                   });
}

double Logistic(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

std::vector<PredictionRecord> ScoreCandidates(const NetworkParams& params,
                                              const ModelConfig& config,
                                              const VideoEntry& video,
                                              const QueryFeatures& query) {
  if (video.clips.empty()) {
    Fail(ErrorCode::kInvalidArgument,
         "video '" + video.meta.video_id + "' has no candidates");
  }
  std::vector<PredictionRecord> predictions;
  predictions.reserve(video.clips.size());
  for (std::size_t i = 0; i < video.clips.size(); ++i) {
    const ClipFeatures& features = video.features[i];
    HeadOutput out =
        Forward(params, config, features, query, Mode::kEval, /*seed=*/0);
    PredictionRecord record;
    record.clip = video.clips[i];
    record.alignment_score = Logistic(out.alignment_score);
    record.actionness = features.actionness;
    record.weighted_score = record.alignment_score * record.actionness;
    record.refined = ApplyOffsets(record.clip, out.start_offset,
                                  out.end_offset, video.meta.duration);
    predictions.push_back(record);
  }
  RankPredictions(predictions);
  return predictions;
}

void SaveCheckpoint(const NetworkParams& params, const ModelConfig& config,
                    const std::filesystem::path& path) {
  std::vector<TensorRecord> records;
  for (const auto& tensor : params.Tensors()) {
    records.push_back(MakeRecord(tensor.name, tensor.shape, tensor.values));
  }
  WriteArchive(records, path);
  std::filesystem::path sidecar = path;
  sidecar += ".json";
  std::ofstream out(sidecar, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorCode::kIo, "cannot open " + sidecar.string());
  out << ToJson(config).dump(2) << '\n';
}

std::pair<NetworkParams, ModelConfig> LoadCheckpoint(
    const std::filesystem::path& path) {
  std::filesystem::path sidecar = path;
  sidecar += ".json";
  std::ifstream in(sidecar);
  if (!in) Fail(ErrorCode::kIo, "cannot open " + sidecar.string());
  nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
  if (doc.is_discarded()) {
    Fail(ErrorCode::kParse, "malformed checkpoint sidecar " + sidecar.string());
  }
  ModelConfig config = ModelConfigFromJson(doc);
  NetworkParams params = NetworkParams::Zeros(config);

  FeatureStore store;
  for (TensorRecord& record : ReadArchive(path)) store.Add(std::move(record));
  for (auto& tensor : params.Tensors()) {
    const TensorRecord& record = store.Get(tensor.name);
    if (record.shape != tensor.shape) {
      Fail(ErrorCode::kDimMismatch,
           "checkpoint tensor '" + tensor.name + "' has the wrong shape");
    }
    std::copy(record.data.begin(), record.data.end(), tensor.values.begin());
  }
  params.Touch();
  return {std::move(params), std::move(config)};
}

}  // namespace mml
