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

#include "mml/synth.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "mml/dataset.h"
#include "mml/features.h"
#include "mml/hashing.h"
#include "mml/status.h"

namespace mml {
namespace {

constexpr const char* kVerbNames[] = {"open",  "hold", "take",  "put",
                                      "eat",   "wash", "watch", "throw",
                                      "close", "sit",  "pour",  "read"};
constexpr const char* kObjectNames[] = {
    "door",  "cup",   "phone", "shoe",   "pillow", "sandwich", "towel",
    "dish",  "book",  "laptop", "bag",   "chair",  "blanket",  "box",
    "glass", "broom", "mirror", "bottle", "shelf", "window"};

std::string VerbName(int index) {
  if (index < static_cast<int>(std::size(kVerbNames))) return kVerbNames[index];
  return "verb" + std::to_string(index);
}

std::string ObjectName(int index) {
  if (index < static_cast<int>(std::size(kObjectNames))) {
    return kObjectNames[index];
  }
  return "object" + std::to_string(index);
}

std::string PaddedId(const char* prefix, int index) {
  std::string digits = std::to_string(index);
  if (digits.size() < 3) digits.insert(0, 3 - digits.size(), '0');
  return prefix + digits;
}

// k distinct values from [0, n).
std::vector<int> SampleDistinct(std::mt19937_64& rng, int n, int k) {
  std::vector<int> values(static_cast<std::size_t>(n));
  std::iota(values.begin(), values.end(), 0);
  for (int i = 0; i < k; ++i) {
    std::uniform_int_distribution<int> pick(i, n - 1);
    std::swap(values[static_cast<std::size_t>(i)],
              values[static_cast<std::size_t>(pick(rng))]);
  }
  values.resize(static_cast<std::size_t>(k));
  return values;
}

std::vector<double> GaussianCode(std::uint64_t seed, std::size_t dim) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> code(dim);
  for (double& x : code) x = normal(rng);
  return code;
}

struct PlannedQuery {
  int verb = 0;
  int object = 0;
  Interval gt;
};

int SignalChannel(EmbeddingKind kind, const SynthQueryInfo& info) {
  return kind == EmbeddingKind::kObjectSegmentation ? info.object + 1
                                                    : info.verb;
}

EmbeddingKind OracleKind(const SynthConfig& config) {
  for (EmbeddingKind kind :
       {EmbeddingKind::kObjectSegmentation,
        EmbeddingKind::kVisualActivityConcepts, EmbeddingKind::kC3dFc6,
        EmbeddingKind::kVideoCaptioning}) {
    if (config.signal_kinds.contains(kind)) return kind;
  }
  Fail(ErrorCode::kInvalidArgument, "synthetic config plants no signal");
}

}  // namespace

EmbeddingDims SynthConfig::DefaultSynthDims() {
  EmbeddingDims dims;
  dims.Override(EmbeddingKind::kC3dFc6, 64);
  dims.Override(EmbeddingKind::kVisualActivityConcepts, 32);
  dims.Override(EmbeddingKind::kVideoCaptioning, 64);
  return dims;
}

void SynthConfig::Validate() const {
  if (n_videos < 1 || n_queries < 0) {
    Fail(ErrorCode::kInvalidArgument, "n_videos must be >= 1");
  }
  if (!(min_duration > 0.0 && max_duration >= min_duration)) {
    Fail(ErrorCode::kInvalidArgument, "invalid duration range");
  }
  if (!(frame_rate > 0.0)) {
    Fail(ErrorCode::kInvalidArgument, "frame_rate must be positive");
  }
  if (!(min_gt_length > 0.0 && max_gt_length >= min_gt_length)) {
    Fail(ErrorCode::kInvalidArgument, "invalid ground-truth length range");
  }
  if (n_verbs < 1 || n_objects < 1) {
    Fail(ErrorCode::kInvalidArgument, "vocabularies must be non-empty");
  }
  if (!(signal_strength > 0.0) || !(noise_sigma >= 0.0) ||
      !(dense_noise_sigma.value_or(0.0) >= 0.0)) {
    Fail(ErrorCode::kInvalidArgument,
         "signal_strength must be > 0 and noise_sigma >= 0");
  }
  if (!(test_fraction >= 0.0 && test_fraction < 1.0)) {
    Fail(ErrorCode::kInvalidArgument, "test_fraction must lie in [0, 1)");
  }
  if (!IsSentenceKind(sentence_kind) || !IsVoKind(vo_kind)) {
    Fail(ErrorCode::kInvalidArgument, "invalid sentence / VO kind");
  }
  if (raw_map_side < 0) {
    Fail(ErrorCode::kInvalidArgument, "raw_map_side must be >= 0");
  }
  if (n_objects > static_cast<int>(kObjectClasses) - 1) {
    Fail(ErrorCode::kInvalidArgument,
         "object vocabulary (" + std::to_string(n_objects) +
             ") exceeds the " + std::to_string(kObjectClasses - 1) +
             " non-background segmentation classes");
  }
  for (EmbeddingKind kind : signal_kinds) {
    if (kind == EmbeddingKind::kObjectSegmentation) continue;
    if (kind != EmbeddingKind::kC3dFc6 &&
        kind != EmbeddingKind::kVisualActivityConcepts &&
        kind != EmbeddingKind::kVideoCaptioning) {
      Fail(ErrorCode::kInvalidArgument,
           std::string(KindName(kind)) + " cannot carry a planted signal");
    }
    if (static_cast<std::size_t>(n_verbs) > dims.Get(kind)) {
      Fail(ErrorCode::kInvalidArgument,
           "verb vocabulary (" + std::to_string(n_verbs) + ") exceeds the " +
               std::to_string(dims.Get(kind)) + " channels of " +
               std::string(KindName(kind)));
    }
  }
}

SynthDataset GenerateSynth(const SynthConfig& config) {
  config.Validate();
  SynthDataset out;
  std::mt19937_64 rng(MixSeed(config.seed, {0x5F17}));
  std::normal_distribution<double> normal(0.0, 1.0);
  auto uniform = [&](double lo, double hi) {
    return lo + (hi - lo) * ToUnitDouble(rng());
  };

  const int test_videos = static_cast<int>(
      std::ceil(config.test_fraction * config.n_videos));
  const int first_test_video = config.n_videos - test_videos;
  const std::size_t object_dim = kObjectClasses;
  const double alpha = std::min(1.0, config.signal_strength);

  std::map<std::pair<int, int>, bool> used_pairs;
  for (int v = 0; v < config.n_videos; ++v) {
    VideoMeta meta;
    meta.video_id = PaddedId("v", v);
    meta.duration = uniform(config.min_duration, config.max_duration);
    meta.frame_rate = config.frame_rate;

    // Queries are dealt to videos round-robin.
    int k = config.n_queries / config.n_videos +
            (v < config.n_queries % config.n_videos ? 1 : 0);
    if (k > config.n_verbs || k > config.n_objects) {
      Fail(ErrorCode::kInvalidArgument,
           "each video needs distinct verbs and objects for its " +
               std::to_string(k) + " queries");
    }
    std::vector<int> verbs = SampleDistinct(rng, config.n_verbs, k);
    std::vector<int> objects = SampleDistinct(rng, config.n_objects, k);
    std::vector<double> lengths(static_cast<std::size_t>(k));
    double total = 0.0;
    for (double& len : lengths) {
      len = uniform(config.min_gt_length, config.max_gt_length);
      total += len;
    }
    if (total > meta.duration) {
      Fail(ErrorCode::kInvalidArgument,
           "video " + meta.video_id + " is too short for its queries");
    }
    // Random gaps around the intervals, in a random slot order.
    std::vector<double> gaps(static_cast<std::size_t>(k) + 1);
    double gap_total = 0.0;
    for (double& g : gaps) {
      g = -std::log(1.0 - ToUnitDouble(rng()));
      gap_total += g;
    }
    std::vector<int> slots = SampleDistinct(rng, k, k);
    std::vector<PlannedQuery> planned(static_cast<std::size_t>(k));
    double cursor = 0.0;
    const double free_time = meta.duration - total;
    for (int s = 0; s < k; ++s) {
      const int q = slots[static_cast<std::size_t>(s)];
      cursor += free_time * gaps[static_cast<std::size_t>(s)] / gap_total;
      const double len = lengths[static_cast<std::size_t>(q)];
      planned[static_cast<std::size_t>(q)] = {
          verbs[static_cast<std::size_t>(q)],
          objects[static_cast<std::size_t>(q)],
          {cursor, std::min(cursor + len, meta.duration)}};
      cursor += len;
    }

    // Timelines.
    const auto frame_count =
        static_cast<std::int64_t>(std::floor(meta.duration * meta.frame_rate));
    const std::size_t rows =
        SampleFrameIndices(std::max<std::int64_t>(frame_count, 1)).size();
    auto active_query = [&](std::size_t row) -> const PlannedQuery* {
      const double t = static_cast<double>(row) *
                       static_cast<double>(kFrameSampleStride) /
                       meta.frame_rate;
      for (const PlannedQuery& p : planned) {
        if (t >= p.gt.start && t < p.gt.end) return &p;
      }
      return nullptr;
    };

    for (EmbeddingKind kind :
         {EmbeddingKind::kC3dFc6, EmbeddingKind::kVisualActivityConcepts,
          EmbeddingKind::kVideoCaptioning}) {
      const std::size_t dim = config.dims.Get(kind);
      const bool planted = config.signal_kinds.contains(kind);
      const double sigma = config.dense_noise_sigma.value_or(config.noise_sigma);
      std::vector<double> values(rows * dim);
      for (std::size_t r = 0; r < rows; ++r) {
        const PlannedQuery* p = active_query(r);
        for (std::size_t c = 0; c < dim; ++c) {
          double x = sigma > 0.0 ? sigma * normal(rng) : 0.0;
          if (planted && p && static_cast<int>(c) == p->verb) {
            x += config.signal_strength;
          }
          values[r * dim + c] = x;
        }
      }
      std::string key = meta.video_id + "/" + std::string(KindName(kind));
      out.records.push_back(
          MakeRecord(key, {static_cast<std::uint32_t>(rows),
                           static_cast<std::uint32_t>(dim)},
                     values));
      meta.clip_feature_refs[kind] = key;
    }

    {
      const bool planted =
          config.signal_kinds.contains(EmbeddingKind::kObjectSegmentation);
      auto noisy_distribution = [&](std::vector<double> p) {
        if (config.noise_sigma > 0.0) {
          double sum = 0.0;
          for (double& x : p) {
            x += config.noise_sigma * std::abs(normal(rng)) /
                 static_cast<double>(object_dim);
            sum += x;
          }
          for (double& x : p) x /= sum;
        }
        return p;
      };
      std::vector<double> values(rows * object_dim);
      for (std::size_t r = 0; r < rows; ++r) {
        const PlannedQuery* p = active_query(r);
        std::vector<double> clean(object_dim, 0.0);
        clean[0] = 1.0;
        if (planted && p) {
          clean[0] = 1.0 - alpha;
          clean[static_cast<std::size_t>(p->object) + 1] += alpha;
        }
        std::vector<double> frame;
        if (config.raw_map_side > 0) {
          FrameClassMap map;
          map.height = map.width = static_cast<std::size_t>(config.raw_map_side);
          map.classes = object_dim;
          for (std::size_t px = 0; px < map.height * map.width; ++px) {
            std::vector<double> pixel = noisy_distribution(clean);
            map.probs.insert(map.probs.end(), pixel.begin(), pixel.end());
          }
          frame = FrameClassMeans(map);
        } else {
          frame = noisy_distribution(clean);
        }
        std::copy(frame.begin(), frame.end(),
                  values.begin() + static_cast<std::ptrdiff_t>(r * object_dim));
      }
      std::string key = meta.video_id + "/object_segmentation";
      out.records.push_back(
          MakeRecord(key, {static_cast<std::uint32_t>(rows),
                           static_cast<std::uint32_t>(object_dim)},
                     values));
      meta.clip_feature_refs[EmbeddingKind::kObjectSegmentation] = key;
    }

    if (config.emit_actionness) {
      std::vector<double> ones(rows, 1.0);
      std::string key = meta.video_id + "/actionness";
      out.records.push_back(
          MakeRecord(key, {static_cast<std::uint32_t>(rows)}, ones));
      meta.clip_feature_refs[EmbeddingKind::kActionness] = key;
    }

    const bool is_test = v >= first_test_video;
    for (int q = 0; q < k; ++q) {
      const PlannedQuery& p = planned[static_cast<std::size_t>(q)];
      QueryRecord query;
      query.video_id = meta.video_id;
      query.query_id = meta.video_id + "_q" + std::to_string(q);
      query.vo_pair = {VerbName(p.verb), ObjectName(p.object)};
      query.text =
          "person " + query.vo_pair.verb + " the " + query.vo_pair.object;
      query.gt = p.gt;
      const std::string pair_key =
          query.vo_pair.verb + "/" + query.vo_pair.object;
      query.embedding_refs[config.sentence_kind] = "sent/" + pair_key;
      query.embedding_refs[config.vo_kind] = "vo/" + pair_key;
      used_pairs[{p.verb, p.object}] = true;
      out.info.push_back({query.query_id, query.video_id, p.verb, p.object});
      (is_test ? out.test_queries : out.train_queries).push_back(query);
    }
    out.videos.push_back(std::move(meta));
  }
  // Keep info in train-then-test order.
  std::stable_partition(out.info.begin(), out.info.end(),
                        [&](const SynthQueryInfo& info) {
                          return info.video_id <
                                 PaddedId("v", first_test_video);
                        });

  const std::size_t sentence_dim = config.dims.Get(config.sentence_kind);
  const std::size_t vo_dim = config.dims.Get(config.vo_kind);
  for (const auto& [pair, unused] : used_pairs) {
    const auto [verb, object] = pair;
    const std::string pair_key = VerbName(verb) + "/" + ObjectName(object);
    std::vector<double> sentence = GaussianCode(
        MixSeed(config.seed, {0x5E7, static_cast<std::uint64_t>(verb),
                              static_cast<std::uint64_t>(object)}),
        sentence_dim);
    std::vector<double> vo = GaussianCode(
        MixSeed(config.seed, {0x70, static_cast<std::uint64_t>(verb)}), vo_dim);
    std::vector<double> object_code = GaussianCode(
        MixSeed(config.seed, {0x0B, static_cast<std::uint64_t>(object)}),
        vo_dim);
    for (std::size_t i = 0; i < vo_dim; ++i) vo[i] += object_code[i];
    out.records.push_back(MakeRecord(
        "sent/" + pair_key, {static_cast<std::uint32_t>(sentence_dim)},
        sentence));
    out.records.push_back(MakeRecord(
        "vo/" + pair_key, {static_cast<std::uint32_t>(vo_dim)}, vo));
  }
  return out;
}

SynthPaths WriteSynth(const SynthDataset& dataset,
                      const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  SynthPaths paths{dir / "train.jsonl", dir / "test.jsonl",
                   dir / "features.mmlf"};
  std::set<std::string> train_videos;
  std::set<std::string> test_videos;
  for (const QueryRecord& q : dataset.train_queries) train_videos.insert(q.video_id);
  for (const QueryRecord& q : dataset.test_queries) test_videos.insert(q.video_id);
  std::vector<VideoMeta> train_meta;
  std::vector<VideoMeta> test_meta;
  for (const VideoMeta& video : dataset.videos) {
    if (test_videos.contains(video.video_id)) {
      test_meta.push_back(video);
    } else {
      train_meta.push_back(video);
    }
  }
  WriteManifest(paths.train_manifest, train_meta, dataset.train_queries);
  WriteManifest(paths.test_manifest, test_meta, dataset.test_queries);
  WriteArchive(dataset.records, paths.archive);
  return paths;
}

EvalResult DecodingOracle(const SynthDataset& dataset,
                          const std::vector<QueryRecord>& queries,
                          const std::vector<SynthQueryInfo>& info,
                          const SynthConfig& config,
                          const ProposalConfig& proposals) {
  const EmbeddingKind kind = OracleKind(config);
  std::map<std::string, const TensorRecord*, std::less<>> by_key;
  for (const TensorRecord& record : dataset.records) {
    by_key.emplace(record.key, &record);
  }
  std::map<std::string, const SynthQueryInfo*, std::less<>> info_by_query;
  for (const SynthQueryInfo& i : info) info_by_query.emplace(i.query_id, &i);

  RankedIntervals ranked;
  std::map<std::string, Interval> gts;
  for (const QueryRecord& query : queries) {
    const VideoMeta* video = nullptr;
    for (const VideoMeta& v : dataset.videos) {
      if (v.video_id == query.video_id) video = &v;
    }
    auto info_it = info_by_query.find(query.query_id);
    if (video == nullptr || info_it == info_by_query.end()) {
      Fail(ErrorCode::kNotFound, "unknown query '" + query.query_id + "'");
    }
    const TensorRecord& timeline =
        *by_key.at(video->clip_feature_refs.at(kind));
    const std::size_t rows = timeline.shape[0];
    const std::size_t dim = timeline.shape[1];
    const std::size_t channel =
        static_cast<std::size_t>(SignalChannel(kind, *info_it->second));
    double peak = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
      peak = std::max(peak, static_cast<double>(timeline.data[r * dim + channel]));
    }

    std::vector<ClipCandidate> clips = GenerateProposals(*video, proposals);
    std::vector<std::pair<double, std::size_t>> scored;
    for (std::size_t c = 0; c < clips.size(); ++c) {
      RowRange range = ClipRows(clips[c].bounds, video->frame_rate, rows);
      double score = 0.0;
      for (std::size_t r = range.begin; r < range.end; ++r) {
        score += timeline.data[r * dim + channel] - 0.5 * peak;
      }
      scored.emplace_back(score, c);
    }
    std::stable_sort(scored.begin(), scored.end(),
                     [](const auto& a, const auto& b) {
                       return a.first > b.first;
                     });
    auto& list = ranked[query.query_id];
    for (const auto& [score, c] : scored) list.push_back(clips[c].bounds);
    gts[query.query_id] = query.gt;
  }
  return RecallAtN(ranked, gts, EvalSpec{});
}

EvalResult RandomRankingOracle(const std::vector<VideoMeta>& videos,
                               const std::vector<QueryRecord>& queries,
                               const ProposalConfig& proposals,
                               std::uint64_t seed) {
  RankedIntervals ranked;
  std::map<std::string, Interval> gts;
  for (const QueryRecord& query : queries) {
    const VideoMeta* video = nullptr;
    for (const VideoMeta& v : videos) {
      if (v.video_id == query.video_id) video = &v;
    }
    if (video == nullptr) {
      Fail(ErrorCode::kNotFound, "unknown video '" + query.video_id + "'");
    }
    std::vector<ClipCandidate> clips = GenerateProposals(*video, proposals);
    std::mt19937_64 rng(MixSeed(seed, {Fnv1a64(query.query_id)}));
    for (std::size_t i = clips.size(); i > 1; --i) {
      std::uniform_int_distribution<std::size_t> pick(0, i - 1);
      std::swap(clips[i - 1], clips[pick(rng)]);
    }
    auto& list = ranked[query.query_id];
    for (const ClipCandidate& clip : clips) list.push_back(clip.bounds);
    gts[query.query_id] = query.gt;
  }
  return RecallAtN(ranked, gts, EvalSpec{});
}

}  // namespace mml
