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

#include "mml/manifest.h"

#include <cmath>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mml/archive.h"
#include "mml/status.h"

namespace mml {
namespace {

using nlohmann::json;

[[noreturn]] void LineError(ErrorCode code, std::size_t line,
                            const std::string& what) {
  Fail(code, "manifest line " + std::to_string(line) + ": " + what);
}

const json& Field(const json& obj, const char* name, std::size_t line) {
  auto it = obj.find(name);
  if (it == obj.end()) {
    LineError(ErrorCode::kParse, line,
              std::string("missing field '") + name + "'");
  }
  return *it;
}

std::string StringField(const json& obj, const char* name, std::size_t line) {
  const json& value = Field(obj, name, line);
  if (!value.is_string()) {
    LineError(ErrorCode::kParse, line,
              std::string("field '") + name + "' must be a string");
  }
  return value.get<std::string>();
}

double NumberField(const json& obj, const char* name, std::size_t line) {
  const json& value = Field(obj, name, line);
  if (!value.is_number()) {
    LineError(ErrorCode::kParse, line,
              std::string("field '") + name + "' must be a number");
  }
  return value.get<double>();
}

std::map<EmbeddingKind, std::string> RefMap(const json& obj, const char* name,
                                            std::size_t line) {
  std::map<EmbeddingKind, std::string> refs;
  auto it = obj.find(name);
  if (it == obj.end()) return refs;
  if (!it->is_object()) {
    LineError(ErrorCode::kParse, line,
              std::string("field '") + name + "' must be an object");
  }
  for (const auto& [kind_name, key] : it->items()) {
    auto kind = ParseKind(kind_name);
    if (!kind) {
      LineError(ErrorCode::kParse, line,
                "unknown embedding kind '" + kind_name + "'");
    }
    if (!key.is_string()) {
      LineError(ErrorCode::kParse, line,
                "archive key for '" + kind_name + "' must be a string");
    }
    refs.emplace(*kind, key.get<std::string>());
  }
  return refs;
}

Interval ParseInterval(const json& value, std::size_t line) {
  Interval gt;
  if (value.is_array() && value.size() == 2 && value[0].is_number() &&
      value[1].is_number()) {
    gt = {value[0].get<double>(), value[1].get<double>()};
  } else if (value.is_object()) {
    gt = {NumberField(value, "start", line), NumberField(value, "end", line)};
  } else {
    LineError(ErrorCode::kParse, line,
              "gt must be [start, end] or {\"start\", \"end\"}");
  }
  if (!IsValid(gt)) {
    std::ostringstream msg;
    msg << "invalid interval " << gt;
    LineError(ErrorCode::kInvalidInterval, line, msg.str());
  }
  return gt;
}

json RefsToJson(const std::map<EmbeddingKind, std::string>& refs) {
  json out = json::object();
  for (const auto& [kind, key] : refs) out[std::string(KindName(kind))] = key;
  return out;
}

}  // namespace

const VideoMeta& Manifest::Video(std::string_view video_id) const {
  for (const VideoMeta& video : videos) {
    if (video.video_id == video_id) return video;
  }
  Fail(ErrorCode::kNotFound, "unknown video '" + std::string(video_id) + "'");
}

Manifest ParseManifestText(std::string_view text, const FeatureStore* store) {
  Manifest manifest;
  std::vector<std::size_t> query_lines;
  std::map<std::string, std::size_t, std::less<>> video_index;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;

    json obj = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (obj.is_discarded() || !obj.is_object()) {
      LineError(ErrorCode::kParse, line_no, "malformed record");
    }

    if (obj.contains("query_id")) {
      QueryRecord query;
      query.video_id = StringField(obj, "video_id", line_no);
      query.query_id = StringField(obj, "query_id", line_no);
      if (auto it = obj.find("text"); it != obj.end() && it->is_string()) {
        query.text = it->get<std::string>();
      }
      if (auto it = obj.find("vo_pair"); it != obj.end()) {
        if (!it->is_object()) {
          LineError(ErrorCode::kParse, line_no, "vo_pair must be an object");
        }
        query.vo_pair = {StringField(*it, "verb", line_no),
                         StringField(*it, "object", line_no)};
      }
      query.gt = ParseInterval(Field(obj, "gt", line_no), line_no);
      query.embedding_refs = RefMap(obj, "embedding_refs", line_no);
      manifest.queries.push_back(std::move(query));
      query_lines.push_back(line_no);
    } else {
      VideoMeta video;
      video.video_id = StringField(obj, "video_id", line_no);
      video.duration = NumberField(obj, "duration", line_no);
      video.frame_rate = NumberField(obj, "frame_rate", line_no);
      if (!(std::isfinite(video.duration) && video.duration > 0.0)) {
        LineError(ErrorCode::kParse, line_no, "duration must be positive");
      }
      if (!(std::isfinite(video.frame_rate) && video.frame_rate > 0.0)) {
        LineError(ErrorCode::kParse, line_no, "frame_rate must be positive");
      }
      video.clip_feature_refs = RefMap(obj, "clip_feature_refs", line_no);
      if (!video_index.emplace(video.video_id, manifest.videos.size())
               .second) {
        LineError(ErrorCode::kParse, line_no,
                  "duplicate video_id '" + video.video_id + "'");
      }
      manifest.videos.push_back(std::move(video));
    }
  }

  std::map<std::string_view, std::size_t> seen_queries;
  for (std::size_t i = 0; i < manifest.queries.size(); ++i) {
    const QueryRecord& query = manifest.queries[i];
    std::size_t line = query_lines[i];
    if (!seen_queries.emplace(query.query_id, line).second) {
      LineError(ErrorCode::kParse, line,
                "duplicate query_id '" + query.query_id + "'");
    }
    auto it = video_index.find(query.video_id);
    if (it == video_index.end()) {
      LineError(ErrorCode::kNotFound, line,
                "unknown video '" + query.video_id + "'");
    }
    const VideoMeta& video = manifest.videos[it->second];
    if (query.gt.end > video.duration) {
      std::ostringstream msg;
      msg << "invalid interval " << query.gt << " exceeds video duration "
          << video.duration;
      LineError(ErrorCode::kInvalidInterval, line, msg.str());
    }
    if (store != nullptr) {
      for (const auto& [kind, key] : query.embedding_refs) {
        if (!store->Contains(key)) {
          LineError(ErrorCode::kDanglingKey, line,
                    "dangling archive key '" + key + "'");
        }
      }
    }
  }
  if (store != nullptr) {
    for (const VideoMeta& video : manifest.videos) {
      for (const auto& [kind, key] : video.clip_feature_refs) {
        if (!store->Contains(key)) {
          Fail(ErrorCode::kDanglingKey,
               "video '" + video.video_id + "': dangling archive key '" +
                   key + "'");
        }
      }
    }
  }
  return manifest;
}

Manifest ParseManifest(const std::filesystem::path& path,
                       const FeatureStore* store) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return ParseManifestText(text, store);
}

std::string FormatManifest(std::span<const VideoMeta> videos,
                           std::span<const QueryRecord> queries) {
  std::string out;
  for (const VideoMeta& video : videos) {
    json obj;
    obj["video_id"] = video.video_id;
    obj["duration"] = video.duration;
    obj["frame_rate"] = video.frame_rate;
    obj["clip_feature_refs"] = RefsToJson(video.clip_feature_refs);
    out += obj.dump();
    out += '\n';
  }
  for (const QueryRecord& query : queries) {
    json obj;
    obj["video_id"] = query.video_id;
    obj["query_id"] = query.query_id;
    obj["text"] = query.text;
    obj["vo_pair"] = {{"verb", query.vo_pair.verb},
                      {"object", query.vo_pair.object}};
    obj["gt"] = {{"start", query.gt.start}, {"end", query.gt.end}};
    obj["embedding_refs"] = RefsToJson(query.embedding_refs);
    out += obj.dump();
    out += '\n';
  }
  return out;
}

void WriteManifest(const std::filesystem::path& path,
                   std::span<const VideoMeta> videos,
                   std::span<const QueryRecord> queries) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorCode::kIo, "cannot open " + path.string());
  out << FormatManifest(videos, queries);
  if (!out) Fail(ErrorCode::kIo, "write failed: " + path.string());
}

}  // namespace mml
