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

#ifndef ORTHOPROBE_TOKENIZERS_TOKENIZER_H_
#define ORTHOPROBE_TOKENIZERS_TOKENIZER_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "orthoprobe/corpus.h"

namespace orthoprobe {

using TokenId = int64_t;

// Id emitted for material the vocabulary cannot represent when the
// vocabulary has no unknown token of its own.
inline constexpr TokenId kNoTokenId = -1;

enum class TokenizerKind { kByteLevelBpe, kWordPiece, kUnigram };

std::string_view ToString(TokenizerKind kind);
// Accepts "byte-level-bpe" (alias "bpe"), "wordpiece", "unigram".
TokenizerKind ParseTokenizerKind(std::string_view name);

// Tokens of one text. Offsets are code point intervals into that text.
struct TokenSequence {
  std::vector<TokenId> ids;
  std::vector<std::string> tokens;
  std::vector<CharSpan> offsets;

  size_t size() const { return ids.size(); }
};

// A loaded subword vocabulary. Instances are immutable after construction
// and Encode is safe to call from many threads.
class Tokenizer {
 public:
  virtual ~Tokenizer() = default;

  virtual TokenizerKind kind() const = 0;

  // Tokenizes running text; `text` must be non-empty valid UTF-8.
  virtual TokenSequence Encode(std::string_view text) const = 0;

  // Tokenizes a single word. With `word_initial` set the word is rendered
  // the way it appears after a space in running text: a leading space for
  // byte-level BPE, a "▁" prefix for unigram, unchanged for WordPiece.
  // Offsets index the word itself; the marker has zero width.
  virtual TokenSequence EncodeWord(std::string_view word,
                                   bool word_initial) const = 0;

  // Whether Encode() of a lone word renders it word-initially. True only
  // for unigram, which prefixes every word with "▁".
  virtual bool StandaloneIsWordInitial() const { return false; }

  // Token surface without continuation / word-boundary markers (and with
  // byte-level BPE symbols mapped back to text).
  virtual std::string StripMarkers(std::string_view token) const = 0;

  size_t vocab_size() const { return vocab_.size(); }
  std::optional<TokenId> Find(std::string_view token) const;
  const std::string& unknown_token() const { return unknown_token_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

 protected:
  // Throws FormatError on duplicate ids.
  void SetVocabulary(std::unordered_map<std::string, TokenId> vocab);
  TokenId UnknownId() const;

  std::unordered_map<std::string, TokenId> vocab_;
  std::string unknown_token_;
  std::vector<std::string> warnings_;
};

// Number of tokens `word` occupies under the given rendering.
size_t TokenLength(const Tokenizer& tokenizer, std::string_view word,
                   bool word_initial);

// Marker-free token strings, as printed in human-facing tables.
std::vector<std::string> StrippedTokens(const Tokenizer& tokenizer,
                                        const TokenSequence& seq);

struct TokenizerFiles {
  TokenizerKind kind = TokenizerKind::kByteLevelBpe;
  std::filesystem::path vocab_file;   // vocab.json / vocab.txt / unigram TSV
  std::filesystem::path merges_file;  // byte-level BPE only
};

std::unique_ptr<Tokenizer> LoadTokenizer(const TokenizerFiles& files);

}  // namespace orthoprobe

#endif  // ORTHOPROBE_TOKENIZERS_TOKENIZER_H_
