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

#ifndef ORTHOPROBE_TOKENIZERS_UNIGRAM_H_
#define ORTHOPROBE_TOKENIZERS_UNIGRAM_H_

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "orthoprobe/tokenizers/tokenizer.h"

namespace orthoprobe {

// UTF-8 encoding of U+2581, the word-boundary marker.
inline constexpr std::string_view kWordBoundary = "\xE2\x96\x81";

// Gap between the lowest piece score and the score charged for one
// unknown character.
inline constexpr double kUnknownPenaltyGap = 10.0;

// SentencePiece-style unigram model decoded with Viterbi.
//
// Every whitespace-delimited word is rendered as "▁" + word and segmented
// to maximize the sum of piece log-probabilities. At a position where no
// single-character piece exists the lattice also offers the unknown token
// for that one character, scored (lowest piece score - 10). Pieces shaped
// like "<...>" (control symbols such as <s>, <cls>) and the unknown token
// are never matched against text.
class UnigramTokenizer : public Tokenizer {
 public:
  struct Segmentation {
    std::vector<std::string> pieces;
    std::vector<CharSpan> spans;  // code points of the rendered word
    double score = 0.0;
  };

  // Piece ids are positions in `pieces`. Throws ConfigError when empty.
  explicit UnigramTokenizer(std::vector<std::pair<std::string, double>> pieces,
                            std::string unknown_token = "<unk>");

  TokenizerKind kind() const override { return TokenizerKind::kUnigram; }
  TokenSequence Encode(std::string_view text) const override;
  TokenSequence EncodeWord(std::string_view word,
                           bool word_initial) const override;
  bool StandaloneIsWordInitial() const override { return true; }
  std::string StripMarkers(std::string_view token) const override;

  // Best segmentation of an already-rendered string.
  Segmentation Viterbi(std::u32string_view rendered) const;

  // Score of a matchable piece, nullopt otherwise.
  std::optional<double> PieceScore(std::string_view piece) const;
  double unknown_penalty() const { return unknown_penalty_; }
  size_t max_piece_chars() const { return max_piece_chars_; }

 private:
  TokenSequence FromSegmentation(const Segmentation& seg, size_t origin,
                                 bool has_marker) const;

  std::unordered_map<std::string, double> scores_;  // matchable pieces only
  size_t max_piece_chars_ = 0;
  double unknown_penalty_ = 0.0;
};

// Reads "piece<TAB>log_prob" lines (a SentencePiece vocab export). Throws
// ConfigError on an empty file, FormatError naming the line on a bad score.
// Positive scores load but are reported through warnings(). A path ending
// in ".model" is read as a binary SentencePiece model instead; its
// UNKNOWN-type piece overrides `unknown_token`.
std::unique_ptr<UnigramTokenizer> LoadUnigram(const std::filesystem::path& tsv,
                                              std::string unknown_token = "<unk>");

}  // namespace orthoprobe

#endif  // ORTHOPROBE_TOKENIZERS_UNIGRAM_H_
