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

#include <fmt/format.h>

#include "orthoprobe/errors.h"
#include "orthoprobe/rng.h"
#include "orthoprobe/tokenizers/tokenizer.h"
#include "orthoprobe/utf8.h"

namespace orthoprobe {

void HiddenStateMatrix::Append(std::span<const double> row, CharSpan offset) {
  if (row.size() != dim_) {
    throw InputError(fmt::format("hidden state has {} components, expected {}",
                                 row.size(), dim_));
  }
  data_.insert(data_.end(), row.begin(), row.end());
  offsets_.push_back(offset);
}

EmbeddingVector PoolWord(const HiddenStateMatrix& hidden, CharSpan target) {
  EmbeddingVector out;
  out.values.assign(hidden.dimension(), 0.0);
  size_t n = 0;
  for (size_t i = 0; i < hidden.rows(); ++i) {
    if (!Overlaps(hidden.offsets()[i], target)) continue;
    const auto row = hidden.row(i);
    for (size_t k = 0; k < row.size(); ++k) out.values[k] += row[k];
    ++n;
  }
  if (n == 0) {
    throw CoverageError(fmt::format(
        "no token overlaps characters [{}, {})", target.start, target.end));
  }
  const double inv = 1.0 / static_cast<double>(n);
  for (double& v : out.values) {
    v *= inv;
    if (!std::isfinite(v)) {
      throw ConsistencyError("pooled embedding has a non-finite component");
    }
  }
  return out;
}

HiddenStateMatrix Embedder::EmbedSequence(std::string_view text) {
  if (text.empty()) throw InputError("cannot embed empty text");
  HiddenStateMatrix hidden = provider_->Embed(text);
  size_t expected = 0;
  if (!dim_.compare_exchange_strong(expected, hidden.dimension()) &&
      expected != hidden.dimension()) {
    throw ConsistencyError(fmt::format(
        "provider dimension changed from {} to {}", expected,
        hidden.dimension()));
  }
  return hidden;
}

ReferenceProvider::ReferenceProvider(std::shared_ptr<const Tokenizer> tokenizer,
                                     double alpha, uint64_t seed,
                                     size_t dimension)
    : tokenizer_(std::move(tokenizer)), alpha_(alpha), seed_(seed),
      dim_(dimension) {
  if (!(alpha_ >= 0.0 && alpha_ < 1.0)) {
    throw ConfigError(fmt::format("reference alpha {} outside [0, 1)", alpha_));
  }
  if (dim_ == 0) throw ConfigError("reference dimension must be positive");
}

std::vector<double> ReferenceProvider::TokenVector(int64_t token_id) const {
  SplitMix64 rng(Mix64(seed_ ^ Mix64(static_cast<uint64_t>(token_id))));
  std::vector<double> u(dim_);
  double norm = 0.0;
  do {
    norm = 0.0;
    for (double& x : u) {
      x = rng.Gaussian();
      norm += x * x;
    }
  } while (norm == 0.0);
  const double inv = 1.0 / std::sqrt(norm);
  for (double& x : u) x *= inv;
  return u;
}

HiddenStateMatrix ReferenceProvider::Embed(std::string_view text) {
  const TokenSequence seq = tokenizer_->Encode(text);
  const size_t n = seq.size();
  std::vector<std::vector<double>> units;
  units.reserve(n);
  std::vector<double> total(dim_, 0.0);
  for (TokenId id : seq.ids) {
    units.push_back(TokenVector(id));
    for (size_t k = 0; k < dim_; ++k) total[k] += units.back()[k];
  }
  HiddenStateMatrix hidden(dim_);
  std::vector<double> row(dim_);
  for (size_t i = 0; i < n; ++i) {
    for (size_t k = 0; k < dim_; ++k) {
      const double context =
          n > 1 ? (total[k] - units[i][k]) / static_cast<double>(n - 1) : 0.0;
      row[k] = units[i][k] + alpha_ * context;
    }
    hidden.Append(row, seq.offsets[i]);
  }
  return hidden;
}

HiddenStateMatrix ReferenceEmbed(const Tokenizer& tokenizer,
                                 std::string_view text, double alpha,
                                 uint64_t seed, size_t dimension) {
  // Non-owning alias; the provider does not outlive this call.
  std::shared_ptr<const Tokenizer> alias(std::shared_ptr<void>(), &tokenizer);
  return ReferenceProvider(alias, alpha, seed, dimension).Embed(text);
}

std::pair<EmbeddingVector, EmbeddingVector> ProbePairNoContext(
    Embedder& embedder, const NoisePair& pair) {
  const CharSpan a{0, utf8::Length(pair.original)};
  const CharSpan b{0, utf8::Length(pair.edited)};
  return {PoolWord(embedder.EmbedSequence(pair.original), a),
          PoolWord(embedder.EmbedSequence(pair.edited), b)};
}

std::pair<EmbeddingVector, EmbeddingVector> ProbePairContext(
    Embedder& embedder, const ContextWindow& context, const NoisePair& pair) {
  const std::string edited = ApplyEditToContext(context, pair);
  return {PoolWord(embedder.EmbedSequence(context.text), context.target_span),
          PoolWord(embedder.EmbedSequence(edited), context.target_span)};
}

}  // namespace orthoprobe
