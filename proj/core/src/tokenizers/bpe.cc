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

#include "orthoprobe/tokenizers/bpe.h"

#include <climits>
#include <fstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "orthoprobe/errors.h"
#include "orthoprobe/tokenizers/byte_char_map.h"
#include "orthoprobe/utf8.h"

namespace orthoprobe {
namespace {

bool IsOther(char32_t cp) {
  return !utf8::IsWhitespace(cp) && !utf8::IsLetter(cp) && !utf8::IsNumber(cp);
}

// Length of a contraction suffix starting at i ("'s", "'ll", ...), or 0.
size_t ContractionAt(std::u32string_view t, size_t i) {
  if (t[i] != U'\'' || i + 1 >= t.size()) return 0;
  const char32_t a = t[i + 1];
  if (a == U's' || a == U't' || a == U'm' || a == U'd') return 2;
  if (i + 2 < t.size()) {
    const char32_t b = t[i + 2];
    if ((a == U'r' && b == U'e') || (a == U'v' && b == U'e') ||
        (a == U'l' && b == U'l')) {
      return 3;
    }
  }
  return 0;
}

}  // namespace

std::vector<CharSpan> PreTokenizeGpt2(std::u32string_view t) {
  std::vector<CharSpan> out;
  const size_t n = t.size();
  size_t i = 0;
  while (i < n) {
    if (size_t c = ContractionAt(t, i)) {
      out.push_back({i, i + c});
      i += c;
      continue;
    }
    const size_t j = (t[i] == U' ') ? i + 1 : i;
    if (j < n && !utf8::IsWhitespace(t[j])) {
      bool (*cls)(char32_t) = utf8::IsLetter(t[j])   ? utf8::IsLetter
                              : utf8::IsNumber(t[j]) ? utf8::IsNumber
                                                     : IsOther;
      size_t k = j + 1;
      while (k < n && cls(t[k])) ++k;
      out.push_back({i, k});
      i = k;
      continue;
    }
    // Whitespace run. All but the last whitespace character go first when
    // a non-space follows, so that a trailing ' ' can prefix the next word.
    size_t k = i;
    while (k < n && utf8::IsWhitespace(t[k])) ++k;
    if (k < n && k - i > 1) k -= 1;
    out.push_back({i, k});
    i = k;
  }
  return out;
}

BpeTokenizer::BpeTokenizer(std::unordered_map<std::string, TokenId> vocab,
                           std::vector<MergeRule> merges,
                           std::string unknown_token,
                           std::vector<size_t> merge_lines) {
  SetVocabulary(std::move(vocab));
  unknown_token_ = std::move(unknown_token);
  ranks_.reserve(merges.size());
  for (size_t r = 0; r < merges.size(); ++r) {
    const auto& [a, b] = merges[r];
    const size_t line = r < merge_lines.size() ? merge_lines[r] : r + 1;
    for (const std::string* sym : {&a, &b}) {
      if (!vocab_.contains(*sym)) {
        throw FormatError(fmt::format(
            "merges line {}: unknown symbol '{}'", line, *sym));
      }
    }
    if (!vocab_.contains(a + b)) {
      throw FormatError(fmt::format(
          "merges line {}: merged symbol '{}' not in vocabulary", line, a + b));
    }
    ranks_.try_emplace(a + " " + b, static_cast<int>(r));
  }
}

int BpeTokenizer::Rank(const std::string& a, const std::string& b) const {
  std::string key;
  key.reserve(a.size() + b.size() + 1);
  key.append(a).push_back(' ');
  key.append(b);
  auto it = ranks_.find(key);
  return it == ranks_.end() ? INT_MAX : it->second;
}

std::vector<std::string> BpeTokenizer::MergeSymbols(
    std::vector<std::string> symbols) const {
  while (symbols.size() > 1) {
    int best = INT_MAX;
    size_t at = 0;
    for (size_t i = 0; i + 1 < symbols.size(); ++i) {
      const int r = Rank(symbols[i], symbols[i + 1]);
      if (r < best) {
        best = r;
        at = i;
      }
    }
    if (best == INT_MAX) break;
    const std::string first = symbols[at];
    const std::string second = symbols[at + 1];
    std::vector<std::string> merged;
    merged.reserve(symbols.size());
    for (size_t i = 0; i < symbols.size();) {
      if (i + 1 < symbols.size() && symbols[i] == first &&
          symbols[i + 1] == second) {
        merged.push_back(first + second);
        i += 2;
      } else {
        merged.push_back(std::move(symbols[i]));
        ++i;
      }
    }
    symbols = std::move(merged);
  }
  return symbols;
}

TokenSequence BpeTokenizer::Encode(std::string_view text) const {
  const ByteCharMap& bytemap = ByteCharMap::Get();
  const std::u32string cps = utf8::Decode(text);
  const std::vector<size_t> char_byte = utf8::CharToByteTable(text);
  // Code point index owning each byte.
  std::vector<size_t> byte_char(text.size());
  for (size_t c = 0; c + 1 < char_byte.size(); ++c) {
    for (size_t b = char_byte[c]; b < char_byte[c + 1]; ++b) byte_char[b] = c;
  }

  TokenSequence seq;
  auto emit = [&](std::string token, size_t b0, size_t b1) {
    auto id = Find(token);
    seq.ids.push_back(id ? *id : UnknownId());
    seq.tokens.push_back(std::move(token));
    seq.offsets.push_back({byte_char[b0], byte_char[b1 - 1] + 1});
  };

  for (const CharSpan& piece : PreTokenizeGpt2(cps)) {
    const size_t b_begin = char_byte[piece.start];
    const size_t b_end = char_byte[piece.end];
    std::vector<std::string> symbols;
    symbols.reserve(b_end - b_begin);
    for (size_t b = b_begin; b < b_end; ++b) {
      symbols.push_back(bytemap.Map(text.substr(b, 1)));
    }
    size_t b = b_begin;
    for (std::string& sym : MergeSymbols(std::move(symbols))) {
      const size_t nbytes = bytemap.Unmap(sym)->size();
      if (vocab_.contains(sym)) {
        emit(std::move(sym), b, b + nbytes);
      } else {
        // Fall back to one token per byte symbol.
        for (size_t k = 0; k < nbytes; ++k) {
          emit(bytemap.Map(text.substr(b + k, 1)), b + k, b + k + 1);
        }
      }
      b += nbytes;
    }
  }
  return seq;
}

TokenSequence BpeTokenizer::EncodeWord(std::string_view word,
                                       bool word_initial) const {
  if (!word_initial) return Encode(word);
  std::string rendered = " ";
  rendered.append(word);
  TokenSequence seq = Encode(rendered);
  // Report offsets in the word's own coordinates; the marker space is
  // zero-width, as in the unigram tokenizer.
  for (auto& o : seq.offsets) {
    o.start = o.start > 0 ? o.start - 1 : 0;
    o.end = o.end > 0 ? o.end - 1 : 0;
  }
  return seq;
}

std::string BpeTokenizer::StripMarkers(std::string_view token) const {
  std::string raw = ByteCharMap::Get().Unmap(token).value_or(std::string(token));
  const auto first = raw.find_first_not_of(' ');
  return first == std::string::npos ? std::string() : raw.substr(first);
}

std::unique_ptr<BpeTokenizer> LoadBpe(const std::filesystem::path& vocab_file,
                                      const std::filesystem::path& merges_file) {
  std::ifstream vin(vocab_file, std::ios::binary);
  if (!vin) {
    throw IoError(fmt::format("cannot read BPE vocab '{}'", vocab_file.string()));
  }
  nlohmann::json doc;
  try {
    vin >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(
        fmt::format("{}: not valid JSON: {}", vocab_file.string(), e.what()));
  }
  if (!doc.is_object()) {
    throw FormatError(fmt::format("{}: expected a JSON object token -> id",
                                  vocab_file.string()));
  }
  std::unordered_map<std::string, TokenId> vocab;
  vocab.reserve(doc.size());
  for (const auto& [token, id] : doc.items()) {
    if (!id.is_number_integer()) {
      throw FormatError(fmt::format("{}: id of '{}' is not an integer",
                                    vocab_file.string(), token));
    }
    vocab.emplace(token, id.get<TokenId>());
  }

  std::ifstream min(merges_file, std::ios::binary);
  if (!min) {
    throw IoError(
        fmt::format("cannot read BPE merges '{}'", merges_file.string()));
  }
  std::vector<MergeRule> merges;
  std::string line;
  size_t line_no = 0;
  std::vector<size_t> line_of;
  while (std::getline(min, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 && line.starts_with("#")) continue;
    if (line.empty()) continue;
    const auto sp = line.find(' ');
    if (sp == std::string::npos || sp == 0 || sp + 1 == line.size() ||
        line.find(' ', sp + 1) != std::string::npos) {
      throw FormatError(fmt::format("{}: line {}: expected 'left right'",
                                    merges_file.string(), line_no));
    }
    line_of.push_back(line_no);
    merges.emplace_back(line.substr(0, sp), line.substr(sp + 1));
  }
  try {
    return std::make_unique<BpeTokenizer>(std::move(vocab), std::move(merges),
                                          "", std::move(line_of));
  } catch (const FormatError& e) {
    throw FormatError(fmt::format("{}: {}", merges_file.string(), e.what()));
  }
}

}  // namespace orthoprobe
