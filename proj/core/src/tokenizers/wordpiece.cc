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

#include "orthoprobe/tokenizers/wordpiece.h"

#include <fstream>

#include <fmt/format.h>

#include "orthoprobe/errors.h"
#include "orthoprobe/utf8.h"

namespace orthoprobe {
namespace {

// BERT treats every non-alphanumeric printable ASCII character as
// punctuation, in addition to the Unicode P* categories.
bool IsBertPunctuation(char32_t cp) {
  if ((cp >= 33 && cp <= 47) || (cp >= 58 && cp <= 64) ||
      (cp >= 91 && cp <= 96) || (cp >= 123 && cp <= 126)) {
    return true;
  }
  return utf8::IsPunctuation(cp);
}

bool IsCjk(char32_t cp) {
  return (cp >= 0x4E00 && cp <= 0x9FFF) || (cp >= 0x3400 && cp <= 0x4DBF) ||
         (cp >= 0x20000 && cp <= 0x2A6DF) || (cp >= 0x2A700 && cp <= 0x2B73F) ||
         (cp >= 0x2B740 && cp <= 0x2B81F) || (cp >= 0x2B820 && cp <= 0x2CEAF) ||
         (cp >= 0xF900 && cp <= 0xFAFF) || (cp >= 0x2F800 && cp <= 0x2FA1F);
}

bool IsDropped(char32_t cp) {
  if (cp == 0 || cp == 0xFFFD) return true;
  return utf8::IsControl(cp) && !utf8::IsWhitespace(cp);
}

}  // namespace

WordPieceTokenizer::WordPieceTokenizer(
    std::unordered_map<std::string, TokenId> vocab, std::string unknown_token,
    size_t max_word_chars, std::string continuation_marker)
    : max_word_chars_(max_word_chars), marker_(std::move(continuation_marker)) {
  SetVocabulary(std::move(vocab));
  unknown_token_ = std::move(unknown_token);
}

void WordPieceTokenizer::EncodeSingle(std::u32string_view word,
                                      std::span<const size_t> source,
                                      TokenSequence& out) const {
  auto span_of = [&](size_t b, size_t e) {
    return CharSpan{source[b], source[e - 1] + 1};
  };
  auto unknown = [&] {
    out.ids.push_back(UnknownId());
    out.tokens.push_back(unknown_token_);
    out.offsets.push_back(span_of(0, word.size()));
  };
  if (word.size() > max_word_chars_) {
    unknown();
    return;
  }
  std::vector<std::pair<std::string, CharSpan>> pieces;
  size_t start = 0;
  while (start < word.size()) {
    size_t end = word.size();
    std::string found;
    for (; end > start; --end) {
      std::string candidate = start > 0 ? marker_ : std::string();
      candidate += utf8::Encode(word.substr(start, end - start));
      if (vocab_.contains(candidate)) {
        found = std::move(candidate);
        break;
      }
    }
    if (end == start) {
      unknown();
      return;
    }
    pieces.emplace_back(std::move(found), span_of(start, end));
    start = end;
  }
  for (auto& [piece, span] : pieces) {
    out.ids.push_back(*Find(piece));
    out.tokens.push_back(std::move(piece));
    out.offsets.push_back(span);
  }
}

TokenSequence WordPieceTokenizer::Encode(std::string_view text) const {
  const std::u32string cps = utf8::Decode(text);
  TokenSequence seq;
  std::u32string word;
  std::vector<size_t> source;  // code point index of each kept character
  auto flush = [&] {
    if (!word.empty()) EncodeSingle(word, source, seq);
    word.clear();
    source.clear();
  };
  for (size_t i = 0; i < cps.size(); ++i) {
    const char32_t cp = cps[i];
    if (utf8::IsWhitespace(cp)) {
      flush();
    } else if (IsBertPunctuation(cp) || IsCjk(cp)) {
      flush();
      const size_t at[] = {i};
      EncodeSingle(std::u32string_view(&cps[i], 1), at, seq);
    } else if (!IsDropped(cp)) {
      word.push_back(cp);
      source.push_back(i);
    }
  }
  flush();
  return seq;
}

TokenSequence WordPieceTokenizer::EncodeWord(std::string_view word,
                                             bool /*word_initial*/) const {
  return Encode(word);
}

std::string WordPieceTokenizer::StripMarkers(std::string_view token) const {
  if (token.starts_with(marker_)) token.remove_prefix(marker_.size());
  return std::string(token);
}

std::unique_ptr<WordPieceTokenizer> LoadWordPiece(
    const std::filesystem::path& vocab_file, std::string unknown_token,
    size_t max_word_chars) {
  std::ifstream in(vocab_file, std::ios::binary);
  if (!in) {
    throw IoError(
        fmt::format("cannot read WordPiece vocab '{}'", vocab_file.string()));
  }
  std::unordered_map<std::string, TokenId> vocab;
  std::string line;
  TokenId id = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    utf8::Validate(line, fmt::format("{}: line {}", vocab_file.string(), id + 1));
    if (!vocab.try_emplace(line, id).second) {
      throw FormatError(fmt::format("{}: line {}: duplicate token '{}'",
                                    vocab_file.string(), id + 1, line));
    }
    ++id;
  }
  return std::make_unique<WordPieceTokenizer>(
      std::move(vocab), std::move(unknown_token), max_word_chars);
}

}  // namespace orthoprobe
