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

// Two-stream fusion network.
//
//   low  = tanh(W_lv [fc6 ; cap])       sent = tanh(W_s sentence)
//   high = tanh(W_hv [obj ; vac])       vo   = tanh(W_vo vo_embedding)
//   z    = [MPU(low, sent) ; MPU(high, vo)]          (8 * common_dim)
//   h    = tanh(W_h z + b_h)
//   [score, start_offset, end_offset] = W_o h + b_o
//
// MPU(a, b) = [a + b ; a * b ; a ; b]. The object and captioning columns
// of W_hv / W_lv always exist; a disabled pathway feeds zeros so that a
// toggle and a zero scale produce the same network.

#ifndef MML_NETWORK_H_
#define MML_NETWORK_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mml/dataset.h"
#include "mml/embedding.h"
#include "mml/features.h"
#include "mml/proposals.h"

namespace mml {

std::vector<double> MpuFuse(std::span<const double> v,
                            std::span<const double> s);

struct ModelConfig {
  EmbeddingKind sentence_kind = EmbeddingKind::kSentenceBert;
  EmbeddingKind vo_kind = EmbeddingKind::kVoGlove;
  bool use_object_features = true;
  bool use_captioning_features = false;
  std::size_t common_dim = 256;
  std::size_t hidden_dim = 256;
  HighLevelFusionConfig fusion;
  double s_cap = 0.005;
  std::uint64_t seed = 0;
  EmbeddingDims dims;

  void Validate() const;
  std::size_t LowInputDim() const;
  std::size_t HighInputDim() const;
  FeatureSelection Selection() const;
};

// Feature toggles of the ablation rows: "mac", "model1" ... "model7".
// Widths and fusion settings keep their defaults.
ModelConfig ModelPreset(std::string_view name);
std::vector<std::string> ModelPresetNames();

using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Linear {
  RowMatrix weight;  // [out, in]
  Eigen::VectorXd bias;
};

// Flat row-major view of one parameter tensor.
template <typename T>
struct ParamTensor {
  std::string name;
  std::vector<std::uint32_t> shape;
  std::span<T> values;
};

class NetworkParams {
 public:
  NetworkParams() = default;

  // Xavier-uniform weights, zero biases, seeded by config.seed.
  static NetworkParams Initialize(const ModelConfig& config);
  static NetworkParams Zeros(const ModelConfig& config);

  Linear low_visual;
  Linear sentence;
  Linear high_visual;
  Linear vo;
  Linear hidden;
  Linear output;

  // Canonical checkpoint keys, e.g. "low_visual.weight".
  std::vector<ParamTensor<double>> Tensors();
  std::vector<ParamTensor<const double>> Tensors() const;
  std::size_t ParameterCount() const;
  bool AllFinite() const;

  // Marks the parameters as modified; forward tapes recorded earlier
  // become stale.
  void Touch();
  std::uint64_t stamp() const { return stamp_; }

  NetworkParams& operator+=(const NetworkParams& other);
  NetworkParams& operator*=(double factor);

 private:
  std::uint64_t stamp_ = 0;
};

struct HeadOutput {
  double alignment_score = 0.0;  // raw, before the logistic link
  double start_offset = 0.0;
  double end_offset = 0.0;
};

// Intermediate activations of one forward pass.
struct ForwardTape {
  bool recorded = false;
  std::uint64_t params_stamp = 0;
  Eigen::VectorXd x_low, x_sent, x_high, x_vo;
  Eigen::VectorXd a_low, a_sent, a_high, a_vo;
  Eigen::VectorXd z, h;
};

// d(loss)/d(head outputs) for one sample.
struct HeadGrad {
  double d_score = 0.0;
  double d_start = 0.0;
  double d_end = 0.0;
};

// Throws kNotFound naming the missing feature kind.
HeadOutput Forward(const NetworkParams& params, const ModelConfig& config,
                   const ClipFeatures& clip, const QueryFeatures& query,
                   Mode mode, std::uint64_t seed, ForwardTape* tape = nullptr);

// Sums per-sample gradients in tape order. Throws kStaleTape when a tape
// is missing or was recorded against different parameters.
NetworkParams Backward(const NetworkParams& params,
                       std::span<const ForwardTape> tapes,
                       std::span<const HeadGrad> grads);

struct PredictionRecord {
  ClipCandidate clip;
  double alignment_score = 0.0;  // logistic(raw head score)
  double actionness = 1.0;
  double weighted_score = 0.0;   // alignment_score * actionness
  Interval refined;
};

// Stable sort by weighted_score descending; ties by earlier clip start,
// then smaller scale index.
void RankPredictions(std::vector<PredictionRecord>& predictions);

std::vector<PredictionRecord> ScoreCandidates(const NetworkParams& params,
                                              const ModelConfig& config,
                                              const VideoEntry& video,
                                              const QueryFeatures& query);

double Logistic(double x);

// Checkpoint = MMLF archive of the parameter tensors plus a JSON sidecar
// holding the model config at `<path>.json`.
void SaveCheckpoint(const NetworkParams& params, const ModelConfig& config,
                    const std::filesystem::path& path);
std::pair<NetworkParams, ModelConfig> LoadCheckpoint(
    const std::filesystem::path& path);

}  // namespace mml

#endif  // MML_NETWORK_H_
