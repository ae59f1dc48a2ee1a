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
#include <numeric>

#include <fmt/format.h>

#include "orthoprobe/errors.h"

namespace orthoprobe {
namespace {

void CheckDims(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw InputError(
        fmt::format("dimension mismatch: {} vs {}", a.size(), b.size()));
  }
}

double Clamp(double x) { return std::clamp(x, -1.0, 1.0); }

}  // namespace

double Cosine(std::span<const double> a, std::span<const double> b) {
  CheckDims(a, b);
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) {
    throw UndefinedSimilarityError("cosine of a zero-norm vector");
  }
  return Clamp(dot / (std::sqrt(na) * std::sqrt(nb)));
}

std::vector<double> RankTransform(std::span<const double> v) {
  std::vector<size_t> order(v.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t x, size_t y) { return v[x] < v[y]; });
  std::vector<double> ranks(v.size());
  for (size_t i = 0; i < order.size();) {
    size_t j = i + 1;
    while (j < order.size() && v[order[j]] == v[order[i]]) ++j;
    // Positions i..j-1 hold ranks i+1..j; their mean is (i + 1 + j) / 2.
    const double rank = 0.5 * static_cast<double>(i + 1 + j);
    for (size_t k = i; k < j; ++k) ranks[order[k]] = rank;
    i = j;
  }
  return ranks;
}

double Spearman(std::span<const double> a, std::span<const double> b) {
  CheckDims(a, b);
  if (a.size() < 2) throw InputError("spearman needs at least 2 components");
  const std::vector<double> ra = RankTransform(a);
  const std::vector<double> rb = RankTransform(b);
  // Average ranks always sum to d(d+1)/2, so the mean is exact.
  const double mean = 0.5 * static_cast<double>(a.size() + 1);
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (size_t i = 0; i < ra.size(); ++i) {
    const double da = ra[i] - mean;
    const double db = rb[i] - mean;
    cov += da * db;
    va += da * da;
    vb += db * db;
  }
  if (va == 0.0 || vb == 0.0) {
    throw UndefinedSimilarityError("spearman of a constant vector");
  }
  return Clamp(cov / std::sqrt(va * vb));
}

SimilarityScore Similarity(std::span<const double> a,
                           std::span<const double> b) {
  SimilarityScore s;
  try {
    s.cosine = Cosine(a, b);
  } catch (const UndefinedSimilarityError&) {
  }
  try {
    s.spearman = Spearman(a, b);
  } catch (const UndefinedSimilarityError&) {
  }
  return s;
}

}  // namespace orthoprobe
