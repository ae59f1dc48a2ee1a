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

#include <algorithm>
#include <fstream>
#include <random>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "orthoprobe/errors.h"
#include "orthoprobe/tokenizers/byte_char_map.h"
#include "orthoprobe/utf8.h"
#include "test_util.h"

namespace orthoprobe {
namespace {

using testing::Assets;
using testing::TempDir;
using testing::TestData;
using testing::WriteFile;

std::unique_ptr<BpeTokenizer> Toy() {
  return LoadBpe(TestData("toy/bpe_vocab.json"), TestData("toy/bpe_merges.txt"));
}

// Offsets cover [0, length) in order without gaps. Tokens that split one
// code point's bytes both claim that code point, so neighbours may overlap
// by exactly one.
void ExpectTiling(const TokenSequence& seq, std::string_view text) {
  size_t at = 0;
  for (const CharSpan& s : seq.offsets) {
    EXPECT_TRUE(s.start == at || s.start + 1 == at) << s.start << " vs " << at;
    EXPECT_LE(s.start, s.end);
    at = std::max(at, s.end);
  }
  EXPECT_EQ(at, utf8::Length(text));
}

TEST(ByteCharMapTest, RoundTripsAllBytes) {
  const auto& map = ByteCharMap::Get();
  std::string all;
  for (int b = 0; b < 256; ++b) all.push_back(static_cast<char>(b));
  EXPECT_EQ(map.Unmap(map.Map(all)), all);
  EXPECT_EQ(map.Forward(' '), U'Ġ');
  EXPECT_EQ(map.Forward('!'), U'!');
  EXPECT_EQ(map.Forward(0), U'Ā');
  EXPECT_EQ(map.Forward(0xAD), U'Ń');
  EXPECT_EQ(map.Unmap("\xE4\xB8\xAD"), std::nullopt);  // U+4E2D is not a symbol
}

TEST(PreTokenizeGpt2Test, SplitsLikeTheReferencePattern) {
  const std::u32string text = U"I'm here  now, 42x!";
  std::vector<std::u32string> pieces;
  for (CharSpan s : PreTokenizeGpt2(text)) {
    pieces.push_back(text.substr(s.start, s.size()));
  }
  EXPECT_EQ(pieces, (std::vector<std::u32string>{U"I", U"'m", U" here", U" ",
                                                 U" now", U",", U" 42", U"x", U"!"}));
}

TEST(BpeTest, ToyVocabulary) {
  const auto tok = Toy();
  EXPECT_EQ(tok->merge_count(), 3u);
  const TokenSequence abc = tok->Encode("abc");
  EXPECT_EQ(abc.tokens, (std::vector<std::string>{"abc"}));
  EXPECT_EQ(abc.ids, (std::vector<TokenId>{4}));
  const TokenSequence two = tok->Encode("abc abc");
  EXPECT_EQ(two.tokens, (std::vector<std::string>{"abc", "\xC4\xA0", "abc"}));
  EXPECT_EQ(two.offsets, (std::vector<CharSpan>{{0, 3}, {3, 4}, {4, 7}}));
  EXPECT_EQ(tok->Encode(" a").tokens, (std::vector<std::string>{"\xC4\xA0" "a"}));
  EXPECT_EQ(tok->MergeSymbols({"a", "b", "c", "a"}),
            (std::vector<std::string>{"abc", "a"}));
}

TEST(BpeTest, UnknownSymbolsWithoutUnknownToken) {
  const auto tok = Toy();
  const TokenSequence seq = tok->Encode("abz");
  EXPECT_EQ(seq.tokens, (std::vector<std::string>{"ab", "z"}));
  EXPECT_EQ(seq.ids.back(), kNoTokenId);
}

TEST(BpeTest, HeaderOnlyMergesFile) {
  TempDir dir;
  WriteFile(dir / "m.txt", "#version: 0.2\n");
  const auto tok = LoadBpe(TestData("toy/bpe_vocab.json"), dir / "m.txt");
  EXPECT_EQ(tok->merge_count(), 0u);
  EXPECT_EQ(tok->Encode("abc").tokens, (std::vector<std::string>{"a", "b", "c"}));
}

TEST(BpeTest, MalformedMergeLineNamesLine) {
  TempDir dir;
  WriteFile(dir / "m.txt", "#version: 0.2\na b\nab\n");
  try {
    LoadBpe(TestData("toy/bpe_vocab.json"), dir / "m.txt");
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
  WriteFile(dir / "m2.txt", "#version: 0.2\na b\nb q\n");
  try {
    LoadBpe(TestData("toy/bpe_vocab.json"), dir / "m2.txt");
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(BpeTest, BadVocabJson) {
  TempDir dir;
  WriteFile(dir / "v.json", "[1, 2]");
  EXPECT_THROW(LoadBpe(dir / "v.json", TestData("toy/bpe_merges.txt")), FormatError);
  WriteFile(dir / "v2.json", "{\"a\": 0, ");
  EXPECT_THROW(LoadBpe(dir / "v2.json", TestData("toy/bpe_merges.txt")), FormatError);
  EXPECT_THROW(LoadBpe(dir / "none.json", TestData("toy/bpe_merges.txt")), IoError);
}

class Gpt2Test : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    if (testing::HaveGpt2()) {
      tok_ = LoadBpe(Assets("gpt2/vocab.json"), Assets("gpt2/merges.txt")).release();
    }
  }
  static void TearDownTestSuite() {
    delete tok_;
    tok_ = nullptr;
  }
  void SetUp() override {
    if (tok_ == nullptr) GTEST_SKIP() << "GPT-2 vocabulary files not found";
  }
  static BpeTokenizer* tok_;
};
BpeTokenizer* Gpt2Test::tok_ = nullptr;

TEST_F(Gpt2Test, VocabularySize) {
  EXPECT_EQ(tok_->vocab_size(), 50257u);
  EXPECT_EQ(tok_->merge_count(), 50000u);
  EXPECT_EQ(tok_->Find("\xC4\xA0" "contenders"), 29467);
}

TEST_F(Gpt2Test, WordInitialGoldens) {
  const TokenSequence a = tok_->EncodeWord("contenders", true);
  EXPECT_EQ(a.size(), 1u);
  EXPECT_EQ(a.offsets, (std::vector<CharSpan>{{0, 10}}));
  const TokenSequence b = tok_->EncodeWord("contelders", true);
  EXPECT_EQ(StrippedTokens(*tok_, b),
            (std::vector<std::string>{"cont", "e", "ld", "ers"}));
  EXPECT_EQ(b.offsets, (std::vector<CharSpan>{{0, 4}, {4, 5}, {5, 7}, {7, 10}}));
  EXPECT_EQ(TokenLength(*tok_, "contenders", false), 2u);
  EXPECT_EQ(TokenLength(*tok_, "contelders", false), 4u);
}

// Frozen output of the Hugging Face GPT-2 tokenizer on the same texts.
TEST_F(Gpt2Test, MatchesReferenceTokenizer) {
  std::ifstream in(TestData("golden/gpt2_tokens.jsonl"));
  std::string line;
  int cases = 0;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    const std::string text = j["text"];
    const TokenSequence seq = tok_->Encode(text);
    EXPECT_EQ(seq.tokens, j["tokens"].get<std::vector<std::string>>()) << text;
    EXPECT_EQ(seq.ids, j["ids"].get<std::vector<TokenId>>()) << text;
    ExpectTiling(seq, text);
    ++cases;
  }
  EXPECT_GE(cases, 10);
}

TEST_F(Gpt2Test, ByteRoundTrip) {
  std::mt19937_64 gen(3);
  const std::vector<std::string> alphabet = {"a", "Z", " ", "\n", "7", ".", "'s",
                                             "\xC3\xA9", "\xE4\xB8\xAD",
                                             "\xF0\x9F\x98\x80", "\xE2\x96\x81"};
  for (int trial = 0; trial < 300; ++trial) {
    std::string text;
    const size_t n = 1 + gen() % 25;
    for (size_t i = 0; i < n; ++i) text += alphabet[gen() % alphabet.size()];
    const TokenSequence seq = tok_->Encode(text);
    std::string joined;
    for (const auto& t : seq.tokens) joined += t;
    ASSERT_EQ(ByteCharMap::Get().Unmap(joined), text);
    for (TokenId id : seq.ids) ASSERT_GE(id, 0);
    ExpectTiling(seq, text);
  }
}

}  // namespace
}  // namespace orthoprobe
