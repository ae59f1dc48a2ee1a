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

#include "orthoprobe/tokenizers/unigram.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

#include <fmt/format.h>

#include "orthoprobe/errors.h"
#include "orthoprobe/utf8.h"

namespace orthoprobe {
namespace {

bool IsControlPiece(std::string_view piece) {
  return piece.size() >= 3 && piece.front() == '<' && piece.back() == '>';
}

constexpr char32_t kBoundaryCp = 0x2581;

// Minimal protobuf reader for SentencePiece ModelProto files: field 1 of
// the model is a repeated SentencePiece {1: piece, 2: score, 3: type}.
class WireReader {
 public:
  WireReader(std::string_view data, std::string_view what)
      : data_(data), what_(what) {}

  bool done() const { return pos_ >= data_.size(); }

  uint64_t Varint() {
    uint64_t v = 0;
    for (int shift = 0; shift < 64; shift += 7) {
      if (done()) Fail("truncated varint");
      const auto b = static_cast<uint8_t>(data_[pos_++]);
      v |= static_cast<uint64_t>(b & 0x7f) << shift;
      if (!(b & 0x80)) return v;
    }
    Fail("varint too long");
  }

  std::string_view Bytes(size_t n) {
    if (n > data_.size() - pos_) Fail("truncated field");
    std::string_view out = data_.substr(pos_, n);
    pos_ += n;
    return out;
  }

  void Skip(uint32_t wire_type) {
    switch (wire_type) {
      case 0: Varint(); return;
      case 1: Bytes(8); return;
      case 2: Bytes(Varint()); return;
      case 5: Bytes(4); return;
      default: Fail(fmt::format("unsupported wire type {}", wire_type));
    }
  }

  [[noreturn]] void Fail(std::string_view why) const {
    throw FormatError(fmt::format("{}: byte {}: {}", what_, pos_, why));
  }

 private:
  std::string_view data_;
  std::string_view what_;
  size_t pos_ = 0;
};

constexpr uint64_t kPieceTypeUnknown = 2;

std::unique_ptr<UnigramTokenizer> LoadSentencePieceModel(
    const std::filesystem::path& path, std::string unknown_token) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot read unigram model '{}'", path.string()));
  const std::string data((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
  const std::string what = path.string();
  std::vector<std::pair<std::string, double>> pieces;
  WireReader model(data, what);
  while (!model.done()) {
    const uint64_t key = model.Varint();
    if (key != ((1 << 3) | 2)) {
      model.Skip(static_cast<uint32_t>(key & 7));
      continue;
    }
    WireReader sp(model.Bytes(model.Varint()), what);
    std::string piece;
    float score = 0.0f;
    uint64_t type = 1;
    while (!sp.done()) {
      const uint64_t k = sp.Varint();
      if (k == ((1 << 3) | 2)) {
        piece = std::string(sp.Bytes(sp.Varint()));
      } else if (k == ((2 << 3) | 5)) {
        std::memcpy(&score, sp.Bytes(4).data(), 4);
      } else if (k == ((3 << 3) | 0)) {
        type = sp.Varint();
      } else {
        sp.Skip(static_cast<uint32_t>(k & 7));
      }
    }
    utf8::Validate(piece, what);
    if (type == kPieceTypeUnknown) unknown_token = piece;
    pieces.emplace_back(std::move(piece), static_cast<double>(score));
  }
  if (pieces.empty()) {
    throw ConfigError(fmt::format("{}: unigram model has no pieces", what));
  }
  return std::make_unique<UnigramTokenizer>(std::move(pieces),
                                            std::move(unknown_token));
}

}  // namespace

UnigramTokenizer::UnigramTokenizer(
    std::vector<std::pair<std::string, double>> pieces,
    std::string unknown_token) {
  if (pieces.empty()) {
    throw ConfigError("unigram model has no pieces (needs at least <unk>)");
  }
  unknown_token_ = std::move(unknown_token);
  std::unordered_map<std::string, TokenId> vocab;
  vocab.reserve(pieces.size());
  double lowest = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < pieces.size(); ++i) {
    const auto& [piece, score] = pieces[i];
    if (!vocab.try_emplace(piece, static_cast<TokenId>(i)).second) {
      throw FormatError(fmt::format("duplicate unigram piece '{}'", piece));
    }
    if (score > 0.0) {
      warnings_.push_back(fmt::format(
          "piece '{}' has positive log-probability {}", piece, score));
    }
    if (piece == unknown_token_ || IsControlPiece(piece) || piece.empty()) {
      continue;
    }
    scores_.emplace(piece, score);
    lowest = std::min(lowest, score);
    max_piece_chars_ = std::max(max_piece_chars_, utf8::Length(piece));
  }
  SetVocabulary(std::move(vocab));
  if (!Find(unknown_token_)) {
    warnings_.push_back(fmt::format(
        "unknown token '{}' is not in the model", unknown_token_));
  }
  unknown_penalty_ =
      (std::isfinite(lowest) ? lowest : 0.0) - kUnknownPenaltyGap;
}

std::optional<double> UnigramTokenizer::PieceScore(std::string_view piece) const {
  auto it = scores_.find(std::string(piece));
  if (it == scores_.end()) return std::nullopt;
  return it->second;
}

UnigramTokenizer::Segmentation UnigramTokenizer::Viterbi(
    std::u32string_view rendered) const {
  const size_t n = rendered.size();
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  struct Node {
    double score = kNegInf;
    size_t prev = 0;
    bool unknown = false;
  };
  std::vector<Node> best(n + 1);
  best[0].score = 0.0;
  std::string buf;
  for (size_t i = 0; i < n; ++i) {
    if (best[i].score == kNegInf) continue;
    bool single = false;
    buf.clear();
    const size_t limit = std::min(n, i + max_piece_chars_);
    for (size_t j = i + 1; j <= limit; ++j) {
      utf8::Append(buf, rendered[j - 1]);
      auto it = scores_.find(buf);
      if (it == scores_.end()) continue;
      if (j == i + 1) single = true;
      const double s = best[i].score + it->second;
      if (s > best[j].score) best[j] = {s, i, false};
    }
    if (!single) {
      const double s = best[i].score + unknown_penalty_;
      if (s > best[i + 1].score) best[i + 1] = {s, i, true};
    }
  }

  Segmentation seg;
  seg.score = best[n].score;
  for (size_t j = n; j > 0;) {
    const size_t i = best[j].prev;
    seg.pieces.push_back(best[j].unknown
                             ? unknown_token_
                             : utf8::Encode(rendered.substr(i, j - i)));
    seg.spans.push_back({i, j});
    j = i;
  }
  std::reverse(seg.pieces.begin(), seg.pieces.end());
  std::reverse(seg.spans.begin(), seg.spans.end());
  return seg;
}

TokenSequence UnigramTokenizer::FromSegmentation(const Segmentation& seg,
                                                 size_t origin,
                                                 bool has_marker) const {
  // The leading marker is zero-width in the source text.
  auto source = [&](size_t r) {
    return origin + (has_marker ? (r == 0 ? 0 : r - 1) : r);
  };
  TokenSequence out;
  for (size_t k = 0; k < seg.pieces.size(); ++k) {
    const auto id = Find(seg.pieces[k]);
    out.ids.push_back(id ? *id : kNoTokenId);
    out.tokens.push_back(seg.pieces[k]);
    out.offsets.push_back({source(seg.spans[k].start),
                           source(seg.spans[k].end)});
  }
  return out;
}

TokenSequence UnigramTokenizer::Encode(std::string_view text) const {
  const std::u32string cps = utf8::Decode(text);
  TokenSequence seq;
  size_t i = 0;
  while (i < cps.size()) {
    if (utf8::IsWhitespace(cps[i])) {
      ++i;
      continue;
    }
    size_t j = i;
    while (j < cps.size() && !utf8::IsWhitespace(cps[j])) ++j;
    std::u32string rendered(1, kBoundaryCp);
    rendered.append(cps, i, j - i);
    TokenSequence part = FromSegmentation(Viterbi(rendered), i, true);
    seq.ids.insert(seq.ids.end(), part.ids.begin(), part.ids.end());
    std::move(part.tokens.begin(), part.tokens.end(),
              std::back_inserter(seq.tokens));
    seq.offsets.insert(seq.offsets.end(), part.offsets.begin(),
                       part.offsets.end());
    i = j;
  }
  return seq;
}

TokenSequence UnigramTokenizer::EncodeWord(std::string_view word,
                                           bool word_initial) const {
  std::u32string rendered;
  if (word_initial) rendered.push_back(kBoundaryCp);
  rendered += utf8::Decode(word);
  return FromSegmentation(Viterbi(rendered), 0, word_initial);
}

std::string UnigramTokenizer::StripMarkers(std::string_view token) const {
  std::string out;
  size_t pos = 0;
  while ((pos = token.find(kWordBoundary)) != std::string_view::npos) {
    out.append(token.substr(0, pos));
    token.remove_prefix(pos + kWordBoundary.size());
  }
  out.append(token);
  return out;
}

std::unique_ptr<UnigramTokenizer> LoadUnigram(const std::filesystem::path& tsv,
                                              std::string unknown_token) {
  if (tsv.extension() == ".model") {
    return LoadSentencePieceModel(tsv, std::move(unknown_token));
  }
  std::ifstream in(tsv, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot read unigram model '{}'", tsv.string()));
  std::vector<std::pair<std::string, double>> pieces;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw FormatError(fmt::format("{}: line {}: expected 'piece<TAB>score'",
                                    tsv.string(), line_no));
    }
    const std::string_view field(line.data() + tab + 1, line.size() - tab - 1);
    double score = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(),
                                     score);
    if (ec != std::errc() || ptr != field.data() + field.size() ||
        !std::isfinite(score)) {
      throw FormatError(fmt::format("{}: line {}: unparsable score '{}'",
                                    tsv.string(), line_no, field));
    }
    std::string piece = line.substr(0, tab);
    utf8::Validate(piece, fmt::format("{}: line {}", tsv.string(), line_no));
    pieces.emplace_back(std::move(piece), score);
  }
  if (pieces.empty()) {
    throw ConfigError(fmt::format(
        "{}: unigram model is empty (needs at least the unknown piece)",
        tsv.string()));
  }
  return std::make_unique<UnigramTokenizer>(std::move(pieces),
                                            std::move(unknown_token));
}

}  // namespace orthoprobe
