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

#ifndef ORTHOPROBE_TOKENIZERS_WORDPIECE_H_
#define ORTHOPROBE_TOKENIZERS_WORDPIECE_H_

#include <filesystem>
#include <memory>
#include <span>
#include <string>

#include "orthoprobe/tokenizers/tokenizer.h"

namespace orthoprobe {

inline constexpr size_t kDefaultMaxWordChars = 100;

// Greedy longest-match-first WordPiece with BERT's cased basic
// pre-tokenization: split on whitespace, isolate punctuation and CJK
// ideographs, drop control characters. No lowercasing or accent
// stripping.
class WordPieceTokenizer : public Tokenizer {
 public:
  WordPieceTokenizer(std::unordered_map<std::string, TokenId> vocab,
                     std::string unknown_token = "[UNK]",
                     size_t max_word_chars = kDefaultMaxWordChars,
                     std::string continuation_marker = "##");

  TokenizerKind kind() const override { return TokenizerKind::kWordPiece; }
  TokenSequence Encode(std::string_view text) const override;
  TokenSequence EncodeWord(std::string_view word,
                           bool word_initial) const override;
  std::string StripMarkers(std::string_view token) const override;

  const std::string& continuation_marker() const { return marker_; }
  size_t max_word_chars() const { return max_word_chars_; }

 private:
  // Appends the pieces of one pre-tokenized word; source[i] is the code
  // point index of word[i] in the original text.
  void EncodeSingle(std::u32string_view word, std::span<const size_t> source,
                    TokenSequence& out) const;

  size_t max_word_chars_;
  std::string marker_;
};

// One token per line; id = zero-based line index. Throws FormatError on a
// duplicate line.
std::unique_ptr<WordPieceTokenizer> LoadWordPiece(
    const std::filesystem::path& vocab_file,
    std::string unknown_token = "[UNK]",
    size_t max_word_chars = kDefaultMaxWordChars);

}  // namespace orthoprobe

#endif  // ORTHOPROBE_TOKENIZERS_WORDPIECE_H_
