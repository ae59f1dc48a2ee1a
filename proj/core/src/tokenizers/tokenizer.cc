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

#include "orthoprobe/tokenizers/tokenizer.h"

#include <unordered_set>

#include <fmt/format.h>

#include "orthoprobe/errors.h"
#include "orthoprobe/tokenizers/bpe.h"
#include "orthoprobe/tokenizers/unigram.h"
#include "orthoprobe/tokenizers/wordpiece.h"

namespace orthoprobe {

std::string_view ToString(TokenizerKind kind) {
  switch (kind) {
    case TokenizerKind::kByteLevelBpe:
      return "byte-level-bpe";
    case TokenizerKind::kWordPiece:
      return "wordpiece";
    case TokenizerKind::kUnigram:
      return "unigram";
  }
  return "unknown";
}

TokenizerKind ParseTokenizerKind(std::string_view name) {
  if (name == "byte-level-bpe" || name == "bpe") {
    return TokenizerKind::kByteLevelBpe;
  }
  if (name == "wordpiece") return TokenizerKind::kWordPiece;
  if (name == "unigram") return TokenizerKind::kUnigram;
  throw ConfigError(fmt::format(
      "unknown tokenizer kind '{}' (expected byte-level-bpe, wordpiece or "
      "unigram)",
      name));
}

std::optional<TokenId> Tokenizer::Find(std::string_view token) const {
  auto it = vocab_.find(std::string(token));
  if (it == vocab_.end()) return std::nullopt;
  return it->second;
}

void Tokenizer::SetVocabulary(std::unordered_map<std::string, TokenId> vocab) {
  std::unordered_set<TokenId> seen;
  seen.reserve(vocab.size());
  for (const auto& [token, id] : vocab) {
    if (!seen.insert(id).second) {
      throw FormatError(
          fmt::format("duplicate token id {} (token '{}')", id, token));
    }
  }
  vocab_ = std::move(vocab);
}

TokenId Tokenizer::UnknownId() const {
  if (unknown_token_.empty()) return kNoTokenId;
  return Find(unknown_token_).value_or(kNoTokenId);
}

size_t TokenLength(const Tokenizer& tokenizer, std::string_view word,
                   bool word_initial) {
  return tokenizer.EncodeWord(word, word_initial).size();
}

std::vector<std::string> StrippedTokens(const Tokenizer& tokenizer,
                                        const TokenSequence& seq) {
  std::vector<std::string> out;
  out.reserve(seq.tokens.size());
  for (const auto& t : seq.tokens) out.push_back(tokenizer.StripMarkers(t));
  return out;
}

std::unique_ptr<Tokenizer> LoadTokenizer(const TokenizerFiles& files) {
  switch (files.kind) {
    case TokenizerKind::kByteLevelBpe:
      if (files.merges_file.empty()) {
        throw ConfigError("byte-level-bpe needs --merges-file");
      }
      return LoadBpe(files.vocab_file, files.merges_file);
    case TokenizerKind::kWordPiece:
      return LoadWordPiece(files.vocab_file);
    case TokenizerKind::kUnigram:
      return LoadUnigram(files.vocab_file);
  }
  throw ConfigError("unsupported tokenizer kind");
}

}  // namespace orthoprobe
