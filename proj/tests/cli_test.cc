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

// Drives the orthoprobe binary end to end.

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "test_util.h"

namespace orthoprobe {
namespace {

using testing::Assets;
using testing::ReadFile;
using testing::TempDir;
using testing::TestData;
using testing::WriteFile;

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

Result RunCli(const TempDir& dir, const std::string& args, const std::string& stdin_text = "") {
  WriteFile(dir / "stdin.txt", stdin_text);
  const std::string cmd = std::string(ORTHOPROBE_CLI) + " " + args + " <" +
                          (dir / "stdin.txt").string() + " >" +
                          (dir / "stdout.txt").string() + " 2>" +
                          (dir / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  Result r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = ReadFile(dir / "stdout.txt");
  r.err = ReadFile(dir / "stderr.txt");
  return r;
}

std::string Gpt2Flags() {
  return "--vocab-file " + Assets("gpt2/vocab.json").string() + " --merges-file " +
         Assets("gpt2/merges.txt").string();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    if (!testing::HaveGpt2()) GTEST_SKIP() << "GPT-2 vocabulary files not found";
  }
  TempDir dir_;
};

TEST_F(CliTest, UsageErrorsExitOne) {
  EXPECT_EQ(RunCli(dir_, "").code, 1);
  EXPECT_EQ(RunCli(dir_, "frobnicate").code, 1);
  EXPECT_EQ(RunCli(dir_, "run --window notanumber").code, 1);
  EXPECT_EQ(RunCli(dir_, "--help").code, 0);
}

TEST_F(CliTest, MissingCorpusNamesPath) {
  const Result r = RunCli(dir_, "extract-vocab --corpus /nonexistent/wiki.txt --out " +
                                 (dir_ / "o").string());
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("/nonexistent/wiki.txt"), std::string::npos) << r.err;
}

TEST_F(CliTest, MalformedVocabLineExitsTwoWithLineNumber) {
  WriteFile(dir_ / "vocab.jsonl",
            "{\"word\":\"house\",\"doc\":\"a\",\"index\":0,\"freq\":1}\n{\"word\":\n");
  const Result r = RunCli(dir_, "noise --vocab " + (dir_ / "vocab.jsonl").string() +
                                 " --out " + (dir_ / "o").string());
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("line 2"), std::string::npos) << r.err;
}

TEST_F(CliTest, ProviderFailureExitsThree) {
  WriteFile(dir_ / "pairs.jsonl",
            R"({"original":"house","edited":"hoise","position":2,"from":"u","to":"i","seed":0})"
            "\n");
  const Result r = RunCli(dir_, Gpt2Flags() + " --retries 1 --provider 'exec:" +
                                 std::string(ORTHOPROBE_FAKE_PROVIDER) +
                                 " die' probe --pairs " + (dir_ / "pairs.jsonl").string() +
                                 " --out " + (dir_ / "o").string());
  EXPECT_EQ(r.code, 3) << r.err;
}

TEST_F(CliTest, RunIsByteIdenticalAcrossReruns) {
  const std::string base = "run --corpus " + TestData("fixture_corpus").string() +
                           " --seed 42 --window 12 " + Gpt2Flags();
  ASSERT_EQ(RunCli(dir_, base + " --workers 1 --out " + (dir_ / "a").string()).code, 0);
  const Result r = RunCli(dir_, base + " --workers 3 --out " + (dir_ / "b").string());
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* name : {"vocab.jsonl", "pairs.jsonl", "contexts.jsonl", "records.jsonl",
                           "report.csv", "lengths.csv", "lengths_summary.csv"}) {
    EXPECT_EQ(ReadFile(dir_ / "a" / name), ReadFile(dir_ / "b" / name)) << name;
    EXPECT_FALSE(ReadFile(dir_ / "a" / name).empty()) << name;
  }
}

TEST_F(CliTest, StagesChainOnDefaultPaths) {
  const std::string common = "--corpus " + TestData("fixture_corpus").string() +
                             " --seed 42 --window 12 " + Gpt2Flags() + " --out " +
                             (dir_ / "s").string();
  for (const char* stage : {"extract-vocab", "noise", "context", "tok-stats"}) {
    const Result r = RunCli(dir_, common + " " + stage);
    ASSERT_EQ(r.code, 0) << stage << ": " << r.err;
  }
  const Result probe = RunCli(dir_, common + " probe --contexts " +
                                     (dir_ / "s" / "contexts.jsonl").string());
  ASSERT_EQ(probe.code, 0) << probe.err;
  ASSERT_EQ(RunCli(dir_, common + " report").code, 0);
  ASSERT_EQ(RunCli(dir_, "run --corpus " + TestData("fixture_corpus").string() +
                          " --seed 42 --window 12 " + Gpt2Flags() + " --out " +
                          (dir_ / "r").string()).code, 0);
  EXPECT_EQ(ReadFile(dir_ / "s" / "records.jsonl"), ReadFile(dir_ / "r" / "records.jsonl"));
  EXPECT_EQ(ReadFile(dir_ / "s" / "report.csv"), ReadFile(dir_ / "r" / "report.csv"));
}

TEST_F(CliTest, ConfigFileWithFlagOverride) {
  WriteFile(dir_ / "run.toml",
            "corpus = \"" + TestData("fixture_corpus").string() + "\"\n"
            "seed = 42\nwindow = 12\nmin-chars = 9\n"
            "vocab-file = \"" + Assets("gpt2/vocab.json").string() + "\"\n"
            "merges-file = \"" + Assets("gpt2/merges.txt").string() + "\"\n");
  ASSERT_EQ(RunCli(dir_, "--config " + (dir_ / "run.toml").string() + " --out " +
                          (dir_ / "c").string() + " extract-vocab").code, 0);
  ASSERT_EQ(RunCli(dir_, "--config " + (dir_ / "run.toml").string() + " --min-chars 4 --out " +
                          (dir_ / "f").string() + " extract-vocab").code, 0);
  auto count = [](const std::string& text) {
    return std::count(text.begin(), text.end(), '\n') - 1;  // minus metadata
  };
  const auto long_only = count(ReadFile(dir_ / "c" / "vocab.jsonl"));
  const auto all = count(ReadFile(dir_ / "f" / "vocab.jsonl"));
  EXPECT_EQ(all, 124);
  EXPECT_GT(long_only, 0);
  EXPECT_LT(long_only, all);
}

TEST_F(CliTest, TokenizeSubcommand) {
  const Result r = RunCli(dir_, Gpt2Flags() + " tokenize ' contenders' ' contelders'");
  ASSERT_EQ(r.code, 0) << r.err;
  std::stringstream ss(r.out);
  std::string first, second;
  std::getline(ss, first);
  std::getline(ss, second);
  const auto a = nlohmann::json::parse(first), b = nlohmann::json::parse(second);
  EXPECT_EQ(a["tokens"].size(), 1u);
  EXPECT_EQ(b["ids"], nlohmann::json({542, 68, 335, 364}));
}

TEST_F(CliTest, ServeReferenceOverStdio) {
  const Result r = RunCli(dir_, Gpt2Flags() + " serve-reference",
                       "{\"id\":\"a\",\"text\":\"the contenders\"}\n");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out.substr(0, r.out.find('\n')));
  EXPECT_EQ(j["id"], "a");
  EXPECT_EQ(j["dim"], 64);
  EXPECT_EQ(j["offsets"], nlohmann::json({{0, 3}, {3, 14}}));
}

}  // namespace
}  // namespace orthoprobe
