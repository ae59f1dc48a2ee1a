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

#include "orthoprobe/metrics.h"

#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles/oracles.h"
#include "orthoprobe/errors.h"

namespace orthoprobe {
namespace {

using Vec = std::vector<double>;

// Random 64-d pairs; every third pair has values rounded onto a coarse
// grid so ties are common.
std::vector<std::pair<Vec, Vec>> RandomPairs(int count, uint64_t seed, int* tied) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  std::vector<std::pair<Vec, Vec>> out;
  *tied = 0;
  for (int k = 0; k < count; ++k) {
    Vec a(64), b(64);
    for (int i = 0; i < 64; ++i) a[i] = normal(gen), b[i] = 0.6 * a[i] + normal(gen);
    if (k % 3 == 0) {
      for (int i = 0; i < 64; ++i) a[i] = std::round(a[i] * 2) / 2, b[i] = std::round(b[i]);
      ++*tied;
    }
    out.emplace_back(std::move(a), std::move(b));
  }
  return out;
}

TEST(RankTransformTest, AveragesTies) {
  EXPECT_EQ(RankTransform(Vec{5, 5, 9}), (Vec{1.5, 1.5, 3}));
  EXPECT_EQ(RankTransform(Vec{3, 1, 2}), (Vec{3, 1, 2}));
  EXPECT_EQ(RankTransform(Vec{7, 7, 7, 1}), (Vec{3, 3, 3, 1}));
  EXPECT_TRUE(RankTransform(Vec{}).empty());
}

TEST(SpearmanTest, HandComputedTieExample) {
  EXPECT_NEAR(Spearman(Vec{1, 2, 2, 4}, Vec{1, 3, 3, 2}), 1.0 / 3.0, 1e-15);
}

TEST(SpearmanTest, ExactExtremes) {
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int trial = 0; trial < 50; ++trial) {
    Vec a(64);
    for (double& x : a) x = u(gen);
    Vec rev(a.rbegin(), a.rend());
    Vec sorted = a, desc = a;
    std::sort(sorted.begin(), sorted.end());
    std::sort(desc.rbegin(), desc.rend());
    EXPECT_EQ(Spearman(a, a), 1.0);
    EXPECT_EQ(Spearman(sorted, desc), -1.0);
    EXPECT_EQ(Spearman(a, rev), Spearman(rev, a));
  }
}

TEST(MetricsTest, MatchBruteForceOracles) {
  int tied = 0;
  const auto pairs = RandomPairs(1000, 77, &tied);
  ASSERT_GE(tied, 100);
  for (const auto& [a, b] : pairs) {
    EXPECT_NEAR(Cosine(a, b), static_cast<double>(oracle::Cosine(a, b)), 1e-12);
    EXPECT_NEAR(Spearman(a, b), static_cast<double>(oracle::Spearman(a, b)), 1e-12);
  }
}

TEST(MetricsTest, InvariancesAndSymmetry) {
  int tied = 0;
  const auto pairs = RandomPairs(200, 5, &tied);
  for (const auto& [a, b] : pairs) {
    Vec scaled = a, cubed = a;
    for (double& x : scaled) x *= 3.5;
    for (double& x : cubed) x = x * x * x + 2.0;
    EXPECT_NEAR(Cosine(scaled, b), Cosine(a, b), 1e-12);
    EXPECT_EQ(Spearman(cubed, b), Spearman(a, b));
    EXPECT_EQ(Cosine(a, b), Cosine(b, a));
    EXPECT_EQ(Spearman(a, b), Spearman(b, a));
    EXPECT_LE(std::abs(Cosine(a, b)), 1.0);
    EXPECT_LE(std::abs(Spearman(a, b)), 1.0);
  }
}

TEST(MetricsTest, UndefinedCases) {
  EXPECT_THROW(Cosine(Vec{0, 0, 0}, Vec{1, 2, 3}), UndefinedSimilarityError);
  EXPECT_THROW(Spearman(Vec{2, 2, 2}, Vec{1, 2, 3}), UndefinedSimilarityError);
  EXPECT_THROW(Cosine(Vec{1, 2}, Vec{1, 2, 3}), InputError);
  EXPECT_THROW(Spearman(Vec{1}, Vec{1}), InputError);
  const SimilarityScore s = Similarity(Vec{0, 0, 0}, Vec{1, 2, 3});
  EXPECT_FALSE(s.cosine.has_value());
  EXPECT_FALSE(s.spearman.has_value());
  const SimilarityScore t = Similarity(Vec{1, 2, 3}, Vec{1, 2, 3});
  EXPECT_EQ(t.cosine, 1.0);
  EXPECT_EQ(t.spearman, 1.0);
}

TEST(CosineTest, KnownValues) {
  EXPECT_EQ(Cosine(Vec{1, 0}, Vec{0, 1}), 0.0);
  EXPECT_EQ(Cosine(Vec{1, 0}, Vec{-2, 0}), -1.0);
  EXPECT_NEAR(Cosine(Vec{1, 1}, Vec{1, 0}), std::sqrt(0.5), 1e-15);
}

}  // namespace
}  // namespace orthoprobe
