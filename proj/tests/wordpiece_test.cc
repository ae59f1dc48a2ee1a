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

#include <gtest/gtest.h>

#include "orthoprobe/errors.h"
#include "test_util.h"

namespace orthoprobe {
namespace {

using testing::TempDir;
using testing::TestData;
using testing::WriteFile;

using Tokens = std::vector<std::string>;

class WordPieceTest : public ::testing::Test {
 protected:
  void SetUp() override { tok_ = LoadWordPiece(TestData("toy/wordpiece.txt")); }
  std::unique_ptr<WordPieceTokenizer> tok_;
};

TEST_F(WordPieceTest, IdsAreLineNumbers) {
  EXPECT_EQ(tok_->vocab_size(), 18u);
  EXPECT_EQ(tok_->Find("[PAD]"), 0);
  EXPECT_EQ(tok_->Find("con"), 4);
  EXPECT_EQ(tok_->Find("##c"), 17);
}

TEST_F(WordPieceTest, GreedyLongestMatch) {
  const TokenSequence a = tok_->Encode("contenders");
  EXPECT_EQ(a.tokens, (Tokens{"contender", "##s"}));
  EXPECT_EQ(a.ids, (std::vector<TokenId>{9, 6}));
  EXPECT_EQ(StrippedTokens(*tok_, a), (Tokens{"contender", "s"}));
  const TokenSequence b = tok_->Encode("contelders");
  EXPECT_EQ(StrippedTokens(*tok_, b), (Tokens{"con", "tel", "ders"}));
  EXPECT_EQ(b.offsets, (std::vector<CharSpan>{{0, 3}, {3, 6}, {6, 10}}));
}

TEST_F(WordPieceTest, PunctuationAndWhitespace) {
  const TokenSequence seq = tok_->Encode("unaffable!  a,abc");
  EXPECT_EQ(seq.tokens,
            (Tokens{"un", "##aff", "##able", "!", "a", ",", "a", "##b", "##c"}));
  EXPECT_EQ(seq.offsets[3], (CharSpan{9, 10}));
  EXPECT_EQ(seq.offsets[4], (CharSpan{12, 13}));
}

TEST_F(WordPieceTest, UnknownWordIsOneToken) {
  const TokenSequence seq = tok_->Encode("xyz abq");
  EXPECT_EQ(seq.tokens, (Tokens{"[UNK]", "[UNK]"}));
  EXPECT_EQ(seq.ids, (std::vector<TokenId>{1, 1}));
  EXPECT_EQ(seq.offsets, (std::vector<CharSpan>{{0, 3}, {4, 7}}));
}

TEST_F(WordPieceTest, CjkIsolatedAndControlsDropped) {
  const TokenSequence seq = tok_->Encode("\xE4\xB8\xAD" "a a\x07" "b");
  EXPECT_EQ(seq.tokens, (Tokens{"[UNK]", "a", "a", "##b"}));
  EXPECT_EQ(seq.offsets, (std::vector<CharSpan>{{0, 1}, {1, 2}, {3, 4}, {5, 6}}));
}

TEST_F(WordPieceTest, WordInitialFlagIsIgnored) {
  EXPECT_EQ(tok_->EncodeWord("contelders", true).tokens,
            tok_->EncodeWord("contelders", false).tokens);
  EXPECT_EQ(TokenLength(*tok_, "contenders", true), 2u);
}

TEST(WordPieceLoadTest, MaxWordChars) {
  const auto tok = LoadWordPiece(TestData("toy/wordpiece.txt"), "[UNK]", 3);
  EXPECT_EQ(tok->Encode("abc").tokens, (Tokens{"a", "##b", "##c"}));
  EXPECT_EQ(tok->Encode("abcb").tokens, (Tokens{"[UNK]"}));
  const auto wide = LoadWordPiece(TestData("toy/wordpiece.txt"));
  EXPECT_EQ(wide->Encode("abcb").tokens, (Tokens{"a", "##b", "##c", "##b"}));
}

TEST(WordPieceLoadTest, DuplicateLineNamesLine) {
  TempDir dir;
  WriteFile(dir / "v.txt", "[UNK]\nfoo\n##bar\nfoo\n");
  try {
    LoadWordPiece(dir / "v.txt");
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos) << e.what();
  }
}

}  // namespace
}  // namespace orthoprobe
