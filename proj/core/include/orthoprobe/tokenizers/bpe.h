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

#ifndef ORTHOPROBE_TOKENIZERS_BPE_H_
#define ORTHOPROBE_TOKENIZERS_BPE_H_

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "orthoprobe/tokenizers/tokenizer.h"

namespace orthoprobe {

using MergeRule = std::pair<std::string, std::string>;

// Splits text the way GPT-2 does before applying merges:
//   's|'t|'re|'ve|'m|'ll|'d| ?\p{L}+| ?\p{N}+| ?[^\s\p{L}\p{N}]+|\s+(?!\S)|\s+
// Returns code point intervals covering the whole input.
std::vector<CharSpan> PreTokenizeGpt2(std::u32string_view text);

// Byte-level BPE over a vocabulary written in ByteCharMap symbols.
class BpeTokenizer : public Tokenizer {
 public:
  // `merges` are in rank order (index 0 merges first). Throws FormatError
  // when a merge side or its concatenation is not in `vocab`. Errors name
  // merge_lines[r] when given, else r + 1.
  BpeTokenizer(std::unordered_map<std::string, TokenId> vocab,
               std::vector<MergeRule> merges, std::string unknown_token = "",
               std::vector<size_t> merge_lines = {});

  TokenizerKind kind() const override { return TokenizerKind::kByteLevelBpe; }
  TokenSequence Encode(std::string_view text) const override;
  TokenSequence EncodeWord(std::string_view word,
                           bool word_initial) const override;
  std::string StripMarkers(std::string_view token) const override;

  size_t merge_count() const { return ranks_.size(); }

  // Applies merges to one pre-token given as mapped symbols.
  std::vector<std::string> MergeSymbols(std::vector<std::string> symbols) const;

 private:
  int Rank(const std::string& a, const std::string& b) const;

  std::unordered_map<std::string, int> ranks_;  // "a b" -> rank
};

// vocab.json (token -> id object) plus merges.txt (one "a b" pair per
// line, optional leading "#" header).
std::unique_ptr<BpeTokenizer> LoadBpe(const std::filesystem::path& vocab_file,
                                      const std::filesystem::path& merges_file);

}  // namespace orthoprobe

#endif  // ORTHOPROBE_TOKENIZERS_BPE_H_
