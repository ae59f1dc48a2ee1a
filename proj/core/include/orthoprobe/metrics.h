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

#ifndef ORTHOPROBE_METRICS_H_
#define ORTHOPROBE_METRICS_H_

#include <optional>
#include <span>
#include <vector>

namespace orthoprobe {

// a.b / (|a| |b|), clamped to [-1, 1]. Throws UndefinedSimilarityError for
// a zero-norm input and InputError for mismatched dimensions.
double Cosine(std::span<const double> a, std::span<const double> b);

// Ascending 1-based ranks; tied values share the mean of their ranks.
std::vector<double> RankTransform(std::span<const double> v);

// Pearson correlation of the two rank vectors, clamped to [-1, 1]. Throws
// UndefinedSimilarityError when either input is constant and InputError
// for mismatched dimensions or fewer than two components.
double Spearman(std::span<const double> a, std::span<const double> b);

struct SimilarityScore {
  std::optional<double> cosine;    // nullopt: undefined for this pair
  std::optional<double> spearman;
};

// Both measures, with undefined values mapped to nullopt.
SimilarityScore Similarity(std::span<const double> a, std::span<const double> b);

}  // namespace orthoprobe

#endif  // ORTHOPROBE_METRICS_H_
