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

// Per-token final-layer states and mean pooling into word embeddings.

#ifndef ORTHOPROBE_EMBED_H_
#define ORTHOPROBE_EMBED_H_

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "orthoprobe/corpus.h"
#include "orthoprobe/noiser.h"

namespace orthoprobe {

class Tokenizer;

// Row-major n x d matrix of hidden states with one character span per row.
class HiddenStateMatrix {
 public:
  HiddenStateMatrix() = default;
  explicit HiddenStateMatrix(size_t dimension) : dim_(dimension) {}

  // Throws InputError when row.size() != dimension().
  void Append(std::span<const double> row, CharSpan offset);

  size_t dimension() const { return dim_; }
  size_t rows() const { return offsets_.size(); }
  std::span<const double> row(size_t i) const {
    return {data_.data() + i * dim_, dim_};
  }
  const std::vector<CharSpan>& offsets() const { return offsets_; }
  const std::vector<double>& data() const { return data_; }

  bool operator==(const HiddenStateMatrix&) const = default;

 private:
  size_t dim_ = 0;
  std::vector<double> data_;
  std::vector<CharSpan> offsets_;
};

struct EmbeddingVector {
  std::vector<double> values;
};

// Half-open intervals intersect in a non-empty range.
inline bool Overlaps(CharSpan a, CharSpan b) {
  return std::max(a.start, b.start) < std::min(a.end, b.end);
}

// Mean of the rows whose offsets overlap `target`. Throws CoverageError
// when no row does, ConsistencyError when the result is not finite.
EmbeddingVector PoolWord(const HiddenStateMatrix& hidden, CharSpan target);

// Source of final-layer hidden states for a text. Implementations either
// tolerate concurrent Embed calls or report max_in_flight() == 1.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual HiddenStateMatrix Embed(std::string_view text) = 0;
  virtual size_t max_in_flight() const { return 1; }
  virtual std::string tag() const = 0;
};

// Wraps a provider and enforces a constant dimension across calls.
class Embedder {
 public:
  explicit Embedder(std::shared_ptr<EmbeddingProvider> provider)
      : provider_(std::move(provider)) {}

  // Throws InputError on empty text and ConsistencyError when the
  // dimension differs from the first call's.
  HiddenStateMatrix EmbedSequence(std::string_view text);

  EmbeddingProvider& provider() { return *provider_; }
  size_t dimension() const { return dim_.load(); }

 private:
  std::shared_ptr<EmbeddingProvider> provider_;
  std::atomic<size_t> dim_{0};
};

inline constexpr size_t kReferenceDimension = 64;

// Deterministic stand-in for a language model. Token id t maps to a unit
// vector u(t) whose components are SplitMix64(Mix64(seed ^ Mix64(t)))
// Gaussians, normalized. Each token's state mixes in its context:
//
//   h_i = u(t_i) + alpha * mean_{j != i} u(t_j)
//
// (the mean is zero for a single token). Offsets come from the tokenizer.
class ReferenceProvider : public EmbeddingProvider {
 public:
  ReferenceProvider(std::shared_ptr<const Tokenizer> tokenizer, double alpha,
                    uint64_t seed, size_t dimension = kReferenceDimension);

  HiddenStateMatrix Embed(std::string_view text) override;
  size_t max_in_flight() const override { return SIZE_MAX; }
  std::string tag() const override { return "reference"; }

  std::vector<double> TokenVector(int64_t token_id) const;

 private:
  std::shared_ptr<const Tokenizer> tokenizer_;
  double alpha_;
  uint64_t seed_;
  size_t dim_;
};

HiddenStateMatrix ReferenceEmbed(const Tokenizer& tokenizer,
                                 std::string_view text, double alpha,
                                 uint64_t seed,
                                 size_t dimension = kReferenceDimension);

// Embeds the original and edited words as standalone texts and pools each
// over the whole word.
std::pair<EmbeddingVector, EmbeddingVector> ProbePairNoContext(
    Embedder& embedder, const NoisePair& pair);

// Embeds the context and its edited copy and pools both over the target
// span (edits preserve length, so the span is shared).
std::pair<EmbeddingVector, EmbeddingVector> ProbePairContext(
    Embedder& embedder, const ContextWindow& context, const NoisePair& pair);

}  // namespace orthoprobe

#endif  // ORTHOPROBE_EMBED_H_
