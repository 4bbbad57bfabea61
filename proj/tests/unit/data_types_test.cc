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

#include <cmath>
#include <limits>
#include <sstream>

#include <gtest/gtest.h>

#include "mml/embedding.h"
#include "mml/interval.h"
#include "mml/status.h"

namespace mml {
namespace {

TEST(IntervalTest, ValidityRules) {
  EXPECT_TRUE(IsValid({2.0, 5.0}));
  EXPECT_TRUE(IsValid({3.0, 3.0}));
  EXPECT_FALSE(IsValid({5.0, 2.0}));
  EXPECT_FALSE(IsValid({-1.0, 2.0}));
  EXPECT_FALSE(IsValid({0.0, std::numeric_limits<double>::infinity()}));
  EXPECT_FALSE(IsValid({std::nan(""), 1.0}));
}

TEST(IntervalTest, ValidateNamesTheProblem) {
  try {
    ValidateInterval({5.0, 2.0}, "gt");
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidInterval);
    EXPECT_NE(std::string(e.what()).find("invalid interval"),
              std::string::npos);
  }
}

TEST(IntervalTest, LengthAndPrinting) {
  Interval i{1.5, 4.0};
  EXPECT_DOUBLE_EQ(i.length(), 2.5);
  std::ostringstream s;
  s << i;
  EXPECT_EQ(s.str(), "[1.5, 4]");
}

TEST(EmbeddingTest, PublishedWidths) {
  EXPECT_EQ(DefaultDim(EmbeddingKind::kSentenceBert), 768u);
  EXPECT_EQ(DefaultDim(EmbeddingKind::kSentenceSkipthought), 4800u);
  EXPECT_EQ(DefaultDim(EmbeddingKind::kVoGlove), 300u);
  EXPECT_EQ(DefaultDim(EmbeddingKind::kVoBert), 768u);
  EXPECT_EQ(DefaultDim(EmbeddingKind::kObjectSegmentation), 150u);
  EXPECT_EQ(DefaultDim(EmbeddingKind::kVideoCaptioning), 2048u);
}

TEST(EmbeddingTest, ConventionalWidths) {
  EXPECT_EQ(DefaultDim(EmbeddingKind::kC3dFc6), 4096u);
  EXPECT_EQ(DefaultDim(EmbeddingKind::kVisualActivityConcepts), 400u);
  EXPECT_EQ(DefaultDim(EmbeddingKind::kSentenceRoberta), 768u);
  EXPECT_EQ(DefaultDim(EmbeddingKind::kActionness), 1u);
}

TEST(EmbeddingTest, NamesRoundTrip) {
  for (EmbeddingKind kind : kAllEmbeddingKinds) {
    auto parsed = ParseKind(KindName(kind));
    ASSERT_TRUE(parsed.has_value()) << KindName(kind);
    EXPECT_EQ(*parsed, kind);
  }
  EXPECT_EQ(KindName(EmbeddingKind::kSentenceBert), "sentence_bert");
  EXPECT_FALSE(ParseKind("sentence_gpt").has_value());
}

TEST(EmbeddingTest, KindFamilies) {
  int sentence = 0, vo = 0, visual = 0;
  for (EmbeddingKind kind : kAllEmbeddingKinds) {
    sentence += IsSentenceKind(kind);
    vo += IsVoKind(kind);
    visual += IsVisualKind(kind);
    EXPECT_EQ(IsSentenceKind(kind) + IsVoKind(kind) + IsVisualKind(kind), 1)
        << KindName(kind);
  }
  EXPECT_EQ(sentence, 3);
  EXPECT_EQ(vo, 2);
  EXPECT_EQ(visual, 5);
}

TEST(EmbeddingTest, OverridesApplyPerKind) {
  EmbeddingDims dims;
  dims.Override(EmbeddingKind::kC3dFc6, 64);
  EXPECT_EQ(dims.Get(EmbeddingKind::kC3dFc6), 64u);
  EXPECT_EQ(dims.Get(EmbeddingKind::kSentenceBert), 768u);
  EXPECT_THROW(dims.Override(EmbeddingKind::kVoGlove, 0), Error);
  EXPECT_THROW(dims.Override(EmbeddingKind::kObjectSegmentation, 100), Error);
  EXPECT_NO_THROW(dims.Override(EmbeddingKind::kObjectSegmentation, 150));
}

}  // namespace
}  // namespace mml
