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

#include <limits>
#include <map>

#include <gtest/gtest.h>

#include "oracles/oracles.h"
#include "orthoprobe/errors.h"
#include "orthoprobe/utf8.h"
#include "test_util.h"

namespace orthoprobe {
namespace {

using testing::TempDir;
using testing::TestData;
using testing::WriteFile;

using Tokens = std::vector<std::string>;

const std::string kB(kWordBoundary);

UnigramTokenizer Fixture() {
  return UnigramTokenizer({{"<unk>", 0.0}, {kB + "a", -1.0}, {"b", -2.0}, {kB + "ab", -2.5}});
}

TEST(UnigramTest, FixtureScores) {
  const auto tok = Fixture();
  EXPECT_EQ(tok.PieceScore(kB + "a"), -1.0);
  EXPECT_EQ(tok.PieceScore("b"), -2.0);
  EXPECT_EQ(tok.PieceScore(kB + "ab"), -2.5);
  EXPECT_EQ(tok.PieceScore("<unk>"), std::nullopt);
  EXPECT_EQ(tok.unknown_penalty(), -12.5);
  EXPECT_EQ(tok.Find("<unk>"), 0);
}

TEST(UnigramTest, PrefersHigherTotalScore) {
  const auto tok = Fixture();
  // "▁ab" scores -2.5 against -3.0 for "▁a" + "b".
  const TokenSequence seq = tok.Encode("ab");
  EXPECT_EQ(seq.tokens, (Tokens{kB + "ab"}));
  EXPECT_EQ(seq.offsets, (std::vector<CharSpan>{{0, 2}}));
  EXPECT_EQ(tok.Encode("abb").tokens, (Tokens{kB + "ab", "b"}));
  EXPECT_EQ(tok.Encode("abb").offsets, (std::vector<CharSpan>{{0, 2}, {2, 3}}));
}

TEST(UnigramTest, UnknownCharacters) {
  const auto tok = Fixture();
  const TokenSequence seq = tok.Encode("azb");
  EXPECT_EQ(seq.tokens, (Tokens{kB + "a", "<unk>", "b"}));
  EXPECT_EQ(seq.ids[1], 0);
  EXPECT_EQ(seq.offsets, (std::vector<CharSpan>{{0, 1}, {1, 2}, {2, 3}}));
  // A bare marker has no piece either.
  const auto seg = tok.Viterbi(U"▁b");
  EXPECT_EQ(seg.pieces, (Tokens{"<unk>", "b"}));
  EXPECT_EQ(seg.score, -14.5);
}

TEST(UnigramTest, WordsAndOffsetsInRunningText) {
  const auto tok = Fixture();
  const TokenSequence seq = tok.Encode("  ab  b");
  EXPECT_EQ(seq.tokens, (Tokens{kB + "ab", "<unk>", "b"}));
  EXPECT_EQ(seq.offsets, (std::vector<CharSpan>{{2, 4}, {6, 6}, {6, 7}}));
}

TEST(UnigramTest, EncodeWordRendering) {
  const auto tok = Fixture();
  EXPECT_TRUE(tok.StandaloneIsWordInitial());
  EXPECT_EQ(tok.EncodeWord("ab", true).tokens, (Tokens{kB + "ab"}));
  EXPECT_EQ(tok.EncodeWord("ab", false).tokens, (Tokens{"<unk>", "b"}));
  EXPECT_EQ(StrippedTokens(tok, tok.EncodeWord("ab", true)), (Tokens{"ab"}));
}

TEST(UnigramTest, ControlPiecesNeverMatch) {
  const UnigramTokenizer tok({{"<unk>", 0.0}, {"<s>", 0.0}, {kB, -1.0}, {"s", -1.0},
                              {"<", -1.0}, {">", -1.0}});
  EXPECT_EQ(tok.Encode("<s>").tokens, (Tokens{kB, "<", "s", ">"}));
}

TEST(UnigramLoadTest, Errors) {
  TempDir dir;
  WriteFile(dir / "empty.tsv", "");
  EXPECT_THROW(LoadUnigram(dir / "empty.tsv"), ConfigError);
  EXPECT_THROW(UnigramTokenizer({}), ConfigError);
  WriteFile(dir / "bad.tsv", "<unk>\t0\na\t-1.5\nb\tlots\n");
  try {
    LoadUnigram(dir / "bad.tsv");
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
  WriteFile(dir / "notab.tsv", "<unk>\t0\na -1\n");
  EXPECT_THROW(LoadUnigram(dir / "notab.tsv"), FormatError);
}

TEST(UnigramLoadTest, PositiveScoreWarns) {
  TempDir dir;
  WriteFile(dir / "pos.tsv", "<unk>\t0\na\t0.5\n");
  const auto tok = LoadUnigram(dir / "pos.tsv");
  ASSERT_EQ(tok->warnings().size(), 1u);
  EXPECT_NE(tok->warnings()[0].find("positive"), std::string::npos);
}

TEST(UnigramLoadTest, SentencePieceModelMatchesTsv) {
  const auto tsv = LoadUnigram(TestData("toy/unigram50.tsv"));
  const auto model = LoadUnigram(TestData("toy/unigram50.model"));
  EXPECT_EQ(model->vocab_size(), tsv->vocab_size());
  EXPECT_EQ(model->unknown_token(), "<unk>");
  EXPECT_EQ(model->unknown_penalty(), tsv->unknown_penalty());
  for (const char* text : {"abc cab", "xax bbx", "aabbcca", "c"}) {
    const TokenSequence a = tsv->Encode(text), b = model->Encode(text);
    EXPECT_EQ(a.tokens, b.tokens) << text;
    EXPECT_EQ(a.ids, b.ids) << text;
  }
  TempDir dir;
  WriteFile(dir / "bad.model", "\x0a\x05\x0a\x03" "ab");  // truncated piece
  EXPECT_THROW(LoadUnigram(dir / "bad.model"), FormatError);
}

TEST(UnigramTest, ViterbiMatchesExhaustiveSearch) {
  const auto tok = LoadUnigram(TestData("toy/unigram50.tsv"));
  ASSERT_EQ(tok->vocab_size(), 50u);
  const std::u32string alphabet = U"abcx";
  size_t checked = 0;
  for (size_t len = 1; len <= 7; ++len) {
    std::vector<size_t> digits(len, 0);
    for (;;) {
      std::u32string rendered = U"▁";
      for (size_t d : digits) rendered += alphabet[d];
      const auto seg = tok->Viterbi(rendered);
      ASSERT_EQ(seg.score, oracle::UnigramBest(*tok, rendered)) << utf8::Encode(rendered);
      ++checked;
      size_t k = 0;
      while (k < len && ++digits[k] == alphabet.size()) digits[k++] = 0;
      if (k == len) break;
    }
  }
  EXPECT_EQ(checked, 21844u);
}

}  // namespace
}  // namespace orthoprobe
