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

#include "mml/sweep.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "mml/evaluation.h"
#include "mml/hashing.h"
#include "mml/status.h"

namespace mml {
namespace {

// Shortest round-trip representation.
std::string FormatNumber(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, end);
}

// Strict ordering: true when `a` beats `b`.
bool Beats(const SweepRow& a, const SweepRow& b) {
  if (a.r1 != b.r1) return a.r1 > b.r1;
  if (a.r5 != b.r5) return a.r5 > b.r5;
  if (a.config.s_obj != b.config.s_obj) return a.config.s_obj < b.config.s_obj;
  if (a.config.d_obj != b.config.d_obj) return a.config.d_obj < b.config.d_obj;
  return a.config.d_vac < b.config.d_vac;
}

SweepRow RunOne(const HighLevelFusionConfig& fusion, std::size_t index,
                const Dataset& dataset, const ModelConfig& base_model,
                const TrainConfig& base_train, const SweepOptions& options) {
  SweepRow row;
  row.config = fusion;
  try {
    const std::uint64_t seed = ConfigSeed(base_train.seed, index);
    ModelConfig model = base_model;
    model.fusion = fusion;
    model.seed = seed;
    TrainConfig train = base_train;
    train.seed = seed;
    TrainResult result = TrainWithHoldout(dataset, model, train);
    row.best_epoch = result.best_epoch;
    row.r1 = std::max(result.best_r1, 0.0);
    row.r5 = std::max(result.best_r5, 0.0);
    if (options.checkpoint_dir) {
      std::filesystem::path path = *options.checkpoint_dir /
                                   ("config_" + std::to_string(index) + ".mmlf");
      SaveCheckpoint(result.best, model, path);
      row.checkpoint_path = path.string();
    }
    row.ok = true;
  } catch (const std::exception& e) {
    spdlog::warn("sweep config {} (s_obj={}, d_obj={}, d_vac={}) failed: {}",
                 index, fusion.s_obj, fusion.d_obj, fusion.d_vac, e.what());
    row.ok = false;
    row.error = e.what();
  }
  return row;
}

}  // namespace

std::vector<HighLevelFusionConfig> EnumerateGrid(const SweepGrid& grid) {
  if (grid.s_obj_values.empty() || grid.d_obj_values.empty() ||
      grid.d_vac_values.empty()) {
    Fail(ErrorCode::kInvalidArgument, "sweep grid axes must be non-empty");
  }
  std::vector<HighLevelFusionConfig> configs;
  for (double s : grid.s_obj_values) {
    for (double d_obj : grid.d_obj_values) {
      for (double d_vac : grid.d_vac_values) {
        HighLevelFusionConfig config{s, d_obj, d_vac};
        config.Validate();
        configs.push_back(config);
      }
    }
  }
  return configs;
}

std::uint64_t ConfigSeed(std::uint64_t base_seed, std::size_t grid_index) {
  return MixSeed(base_seed, {0x5A11E, grid_index});
}

std::optional<HighLevelFusionConfig> SelectWinner(
    std::span<const SweepRow> rows) {
  const SweepRow* best = nullptr;
  for (const SweepRow& row : rows) {
    if (!row.ok) continue;
    if (best == nullptr || Beats(row, *best)) best = &row;
  }
  if (best == nullptr) return std::nullopt;
  return best->config;
}

SweepResult RunSweep(const SweepGrid& grid, const Dataset& dataset,
                     const ModelConfig& base_model,
                     const TrainConfig& base_train,
                     const SweepOptions& options) {
  const std::vector<HighLevelFusionConfig> configs = EnumerateGrid(grid);
  if (options.checkpoint_dir) {
    std::filesystem::create_directories(*options.checkpoint_dir);
  }
  SweepResult result;
  result.rows.resize(configs.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < configs.size();
         i = next.fetch_add(1)) {
      result.rows[i] =
          RunOne(configs[i], i, dataset, base_model, base_train, options);
    }
  };
  const int workers = std::clamp(options.parallelism, 1,
                                 static_cast<int>(configs.size()));
  {
    std::vector<std::jthread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
  }

  result.winner = SelectWinner(result.rows);
  if (!result.winner) {
    Fail(ErrorCode::kRuntime, "every sweep configuration failed");
  }
  return result;
}

std::string FormatResultTable(std::span<const SweepRow> rows) {
  std::string out;
  for (const SweepRow& row : rows) {
    nlohmann::json obj = {{"s_obj", row.config.s_obj},
                          {"d_obj", row.config.d_obj},
                          {"d_vac", row.config.d_vac},
                          {"best_epoch", row.best_epoch},
                          {"r1", row.r1},
                          {"r5", row.r5},
                          {"status", row.ok ? "ok" : "failed"},
                          {"checkpoint_path", row.checkpoint_path}};
    out += obj.dump();
    out += '\n';
  }
  return out;
}

std::vector<SweepRow> ParseResultTable(std::string_view text) {
  std::vector<SweepRow> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto obj = nlohmann::json::parse(line, nullptr, false);
    try {
      if (obj.is_discarded()) throw std::runtime_error("malformed record");
      SweepRow row;
      row.config = {obj.at("s_obj").get<double>(), obj.at("d_obj").get<double>(),
                    obj.at("d_vac").get<double>()};
      row.best_epoch = obj.at("best_epoch").get<int>();
      row.r1 = obj.at("r1").get<double>();
      row.r5 = obj.at("r5").get<double>();
      row.ok = obj.at("status").get<std::string>() == "ok";
      row.checkpoint_path = obj.value("checkpoint_path", "");
      rows.push_back(std::move(row));
    } catch (const std::exception& e) {
      Fail(ErrorCode::kParse, "result table line " + std::to_string(line_no) +
                                  ": " + e.what());
    }
  }
  return rows;
}

std::vector<CurveSeries> BuildCurves(std::span<const SweepRow> rows) {
  std::map<double, std::vector<const SweepRow*>> by_d_obj;
  for (const SweepRow& row : rows) {
    if (row.ok && row.config.d_vac == 0.0) {
      by_d_obj[row.config.d_obj].push_back(&row);
    }
  }
  std::vector<CurveSeries> curves;
  for (const char* metric : {"R@1", "R@5"}) {
    const bool r1 = std::string_view(metric) == "R@1";
    for (const auto& [d_obj, group] : by_d_obj) {
      CurveSeries series;
      series.metric = metric;
      series.d_obj = d_obj;
      series.baseline =
          r1 ? kMacAuthorsBaseline.r1 : kMacAuthorsBaseline.r5;
      for (const SweepRow* row : group) {
        series.points.emplace_back(row->config.s_obj, r1 ? row->r1 : row->r5);
      }
      std::stable_sort(series.points.begin(), series.points.end(),
                       [](const auto& a, const auto& b) {
                         return a.first < b.first;
                       });
      curves.push_back(std::move(series));
    }
  }
  return curves;
}

std::vector<std::filesystem::path> EmitCurves(
    std::span<const SweepRow> rows, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> paths;
  for (const CurveSeries& series : BuildCurves(rows)) {
    std::string metric = series.metric == "R@1" ? "r1" : "r5";
    std::filesystem::path path =
        dir / ("curve_" + metric + "_dobj_" + FormatNumber(series.d_obj) +
               ".tsv");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) Fail(ErrorCode::kIo, "cannot open " + path.string());
    out << "# metric=" << series.metric << " d_obj=" << series.d_obj
        << " d_vac=0\n";
    out << "s_obj\t" << series.metric << "\tbaseline\n";
    for (const auto& [s_obj, value] : series.points) {
      out << FormatNumber(s_obj) << '\t' << FormatNumber(value) << '\t'
          << FormatNumber(series.baseline) << '\n';
    }
    paths.push_back(path);
  }
  return paths;
}

}  // namespace mml
