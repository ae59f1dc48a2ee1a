// Copyright 2026 The Orthoprobe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "orthoprobe/embed.h"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles/oracles.h"
#include "orthoprobe/corpus.h"
#include "orthoprobe/errors.h"
#include "orthoprobe/metrics.h"
#include "orthoprobe/noiser.h"
#include "orthoprobe/tokenizers/wordpiece.h"
#include "test_util.h"

namespace orthoprobe {
namespace {

using testing::TestData;
using Vec = std::vector<double>;

HiddenStateMatrix Matrix(const std::vector<Vec>& rows,
                         const std::vector<CharSpan>& offsets) {
  HiddenStateMatrix m(rows.empty() ? 0 : rows[0].size());
  for (size_t i = 0; i < rows.size(); ++i) m.Append(rows[i], offsets[i]);
  return m;
}

TEST(PoolWordTest, TwoTokenExample) {
  const auto m = Matrix({{1, 0}, {0, 1}, {9, 9}}, {{0, 3}, {3, 5}, {6, 8}});
  EXPECT_EQ(PoolWord(m, {0, 5}).values, (Vec{0.5, 0.5}));
  EXPECT_EQ(PoolWord(m, {4, 7}).values, (Vec{4.5, 5.0}));
  EXPECT_THROW(PoolWord(m, {5, 6}), CoverageError);
}

TEST(PoolWordTest, SingleTokenIsIdentity) {
  std::mt19937_64 gen(4);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 100; ++trial) {
    Vec row(16);
    for (double& x : row) x = normal(gen);
    const auto m = Matrix({row}, {{0, 5}});
    EXPECT_EQ(PoolWord(m, {1, 3}).values, row);
  }
}

TEST(PoolWordTest, MatchesBruteForceOnRandomLayouts) {
  std::mt19937_64 gen(12);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 2000; ++trial) {
    const size_t rows = 1 + gen() % 12, dim = 1 + gen() % 32;
    HiddenStateMatrix m(dim);
    std::vector<Vec> data;
    std::vector<CharSpan> offsets;
    size_t at = 0;
    for (size_t r = 0; r < rows; ++r) {
      Vec row(dim);
      for (double& x : row) x = normal(gen) * 10;
      const size_t len = gen() % 4;  // zero-width tokens included
      offsets.push_back({at, at + len});
      at += len + (gen() % 3 == 0);
      data.push_back(row);
      m.Append(row, offsets.back());
    }
    const size_t s = gen() % (at + 1);
    const CharSpan target{s, s + 1 + gen() % 6};
    const auto want = oracle::Pool(data, offsets, target);
    if (!want) {
      EXPECT_THROW(PoolWord(m, target), CoverageError);
      continue;
    }
    const Vec pooled = PoolWord(m, target).values;
    for (size_t k = 0; k < dim; ++k) {
      ASSERT_NEAR(pooled[k], static_cast<double>((*want)[k]), 1e-12);
    }
  }
}

TEST(PoolWordTest, Linearity) {
  const auto a = Matrix({{1, 2}, {3, 4}}, {{0, 1}, {1, 2}});
  const auto b = Matrix({{-1, 5}, {2, 0}}, {{0, 1}, {1, 2}});
  const auto sum = Matrix({{0, 7}, {5, 4}}, {{0, 1}, {1, 2}});
  const Vec pa = PoolWord(a, {0, 2}).values, pb = PoolWord(b, {0, 2}).values;
  const Vec ps = PoolWord(sum, {0, 2}).values;
  for (size_t k = 0; k < 2; ++k) EXPECT_DOUBLE_EQ(ps[k], pa[k] + pb[k]);
}

TEST(HiddenStateMatrixTest, RejectsWrongRowWidth) {
  HiddenStateMatrix m(3);
  EXPECT_THROW(m.Append(Vec{1, 2}, {0, 1}), InputError);
}

class ReferenceTest : public ::testing::Test {
 protected:
  void SetUp() override { tok_ = LoadWordPiece(TestData("toy/wordpiece.txt")); }
  std::shared_ptr<const Tokenizer> tok_;
};

TEST_F(ReferenceTest, UnitTokenVectorsWithoutContext) {
  ReferenceProvider ref(tok_, 0.0, 42);
  const auto m = ref.Embed("contenders a con");
  ASSERT_EQ(m.rows(), 4u);
  EXPECT_EQ(m.dimension(), kReferenceDimension);
  for (size_t r = 0; r < m.rows(); ++r) {
    double norm = 0;
    for (double x : m.row(r)) norm += x * x;
    EXPECT_NEAR(norm, 1.0, 1e-12);
  }
  const Vec u = ref.TokenVector(4);
  EXPECT_EQ(Vec(m.row(3).begin(), m.row(3).end()), u);
  EXPECT_EQ(m.offsets()[0], (CharSpan{0, 9}));
}

TEST_F(ReferenceTest, ContextMixing) {
  ReferenceProvider ref(tok_, 0.3, 42);
  const auto m = ref.Embed("con a");
  const Vec u = ref.TokenVector(4), v = ref.TokenVector(15);
  for (size_t k = 0; k < u.size(); ++k) {
    EXPECT_DOUBLE_EQ(m.row(0)[k], u[k] + 0.3 * v[k]);
    EXPECT_DOUBLE_EQ(m.row(1)[k], v[k] + 0.3 * u[k]);
  }
  EXPECT_NE(ReferenceProvider(tok_, 0.3, 43).TokenVector(4), u);
  EXPECT_THROW(ReferenceProvider(tok_, 1.0, 1), ConfigError);
  EXPECT_THROW(ReferenceProvider(tok_, 0.3, 1, 0), ConfigError);
}

TEST_F(ReferenceTest, ZeroAlphaContextEqualsNoContext) {
  auto provider = std::make_shared<ReferenceProvider>(tok_, 0.0, 7);
  Embedder embedder(provider);
  const std::vector<CorpusDocument> corpus = {{"d", "a con contenders un a"}};
  const auto ctx = ExtractContext(corpus, {"contenders", "d", 2, 1}, 10);
  NoisePair pair{"contenders", "contelders", 5, 'n', 'l', 0};
  const auto [a, b] = ProbePairNoContext(embedder, pair);
  const auto [c, d] = ProbePairContext(embedder, ctx, pair);
  EXPECT_EQ(a.values, c.values);
  EXPECT_EQ(b.values, d.values);
  EXPECT_EQ(Cosine(a.values, b.values), Cosine(c.values, d.values));
}

TEST_F(ReferenceTest, IdenticalTextGivesSimilarityOne) {
  auto provider = std::make_shared<ReferenceProvider>(tok_, 0.3, 7);
  Embedder embedder(provider);
  NoisePair same{"contenders", "contenders", 5, 'n', 'n', 0};
  const auto [a, b] = ProbePairNoContext(embedder, same);
  EXPECT_EQ(Cosine(a.values, b.values), 1.0);
  EXPECT_EQ(Spearman(a.values, b.values), 1.0);
}

class FixedProvider : public EmbeddingProvider {
 public:
  HiddenStateMatrix Embed(std::string_view text) override {
    HiddenStateMatrix m(text.size());
    m.Append(Vec(text.size(), 1.0), {0, text.size()});
    return m;
  }
  std::string tag() const override { return "fixed"; }
};

TEST(EmbedderTest, DimensionMustStayConstant) {
  Embedder embedder(std::make_shared<FixedProvider>());
  EXPECT_EQ(embedder.EmbedSequence("abc").dimension(), 3u);
  EXPECT_EQ(embedder.dimension(), 3u);
  EXPECT_THROW(embedder.EmbedSequence("abcd"), ConsistencyError);
  EXPECT_THROW(embedder.EmbedSequence(""), InputError);
}

}  // namespace
}  // namespace orthoprobe
