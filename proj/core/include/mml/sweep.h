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

// Grid sweep over the object scale ratio and the two dropout ratios.

#ifndef MML_SWEEP_H_
#define MML_SWEEP_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mml/dataset.h"
#include "mml/features.h"
#include "mml/network.h"
#include "mml/training.h"

namespace mml {

struct SweepGrid {
  std::vector<double> s_obj_values = {0, 0.005, 0.05, 0.1, 0.25, 0.5, 0.75, 1};
  std::vector<double> d_obj_values = {0, 0.1, 0.25, 0.5};
  std::vector<double> d_vac_values = {0, 0.1, 0.25, 0.5};
};

// Cartesian product, s_obj outermost, d_vac innermost.
std::vector<HighLevelFusionConfig> EnumerateGrid(const SweepGrid& grid);

// Seed of the config at `grid_index`.
std::uint64_t ConfigSeed(std::uint64_t base_seed, std::size_t grid_index);

struct SweepRow {
  HighLevelFusionConfig config;
  int best_epoch = 0;
  double r1 = 0.0;
  double r5 = 0.0;
  bool ok = false;
  std::string checkpoint_path;  // empty when not written
  std::string error;            // set when !ok

  bool operator==(const SweepRow&) const = default;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // grid order
  std::optional<HighLevelFusionConfig> winner;
};

// Highest R@1, then higher R@5, then smaller s_obj, d_obj, d_vac.
// Failed rows are ignored; nullopt when every row failed.
std::optional<HighLevelFusionConfig> SelectWinner(
    std::span<const SweepRow> rows);

struct SweepOptions {
  int parallelism = 1;
  // Checkpoints are written as config_<index>.mmlf when set.
  std::optional<std::filesystem::path> checkpoint_dir;
};

// Trains every grid config on a seeded holdout of `dataset`. Each config
// gets ConfigSeed(base seed, index) for initialization, mining and dropout,
// so the result does not depend on parallelism. Throws kRuntime only when
// every config failed.
SweepResult RunSweep(const SweepGrid& grid, const Dataset& dataset,
                     const ModelConfig& base_model,
                     const TrainConfig& base_train,
                     const SweepOptions& options);

// Result table: one JSON line per row with s_obj, d_obj, d_vac,
// best_epoch, r1, r5, status, checkpoint_path.
std::string FormatResultTable(std::span<const SweepRow> rows);
std::vector<SweepRow> ParseResultTable(std::string_view text);

// One plot series: (s_obj, value) points at d_vac = 0 for one d_obj.
struct CurveSeries {
  std::string metric;  // "R@1" or "R@5"
  double d_obj = 0.0;
  std::vector<std::pair<double, double>> points;  // sorted by s_obj
  double baseline = 0.0;  // published MAC reference for the metric
};

std::vector<CurveSeries> BuildCurves(std::span<const SweepRow> rows);

// Writes one tab-separated file per series (curve_<metric>_dobj_<d>.tsv)
// and returns the written paths.
std::vector<std::filesystem::path> EmitCurves(
    std::span<const SweepRow> rows, const std::filesystem::path& dir);

}  // namespace mml

#endif  // MML_SWEEP_H_
