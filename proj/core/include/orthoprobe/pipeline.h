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

// Pipeline stages over file artifacts in one output directory:
//
//   extract-vocab  corpus            -> vocab.jsonl
//   noise          vocab.jsonl       -> pairs.jsonl
//   context        vocab.jsonl       -> contexts.jsonl
//   tok-stats      vocab + pairs     -> lengths.csv, lengths_summary.csv
//   probe          pairs [+contexts] -> records.jsonl
//   report         records.jsonl     -> report.csv
//
// Outputs depend only on the inputs and the hashed part of RunConfig, never
// on the worker count.

#ifndef ORTHOPROBE_PIPELINE_H_
#define ORTHOPROBE_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "orthoprobe/corpus.h"
#include "orthoprobe/providers.h"
#include "orthoprobe/records.h"
#include "orthoprobe/tokenizers/tokenizer.h"

namespace orthoprobe {

namespace artifacts {
inline constexpr char kVocab[] = "vocab.jsonl";
inline constexpr char kPairs[] = "pairs.jsonl";
inline constexpr char kContexts[] = "contexts.jsonl";
inline constexpr char kLengths[] = "lengths.csv";
inline constexpr char kLengthsSummary[] = "lengths_summary.csv";
inline constexpr char kLengthsSvg[] = "lengths.svg";
inline constexpr char kRecords[] = "records.jsonl";
inline constexpr char kReport[] = "report.csv";
}  // namespace artifacts

struct RunConfig {
  std::filesystem::path corpus;
  DocumentMode doc_mode = DocumentMode::kFile;
  size_t min_chars = 4;
  uint64_t seed = 0;
  size_t window = 100;
  TokenizerFiles tokenizer;
  bool word_initial = true;  // token-length convention for tok-stats
  std::string provider = "reference";
  double alpha = 0.3;
  size_t reference_dimension = kReferenceDimension;
  size_t max_bin = 6;
  double ci_level = 0.99;
  std::optional<std::filesystem::path> lexicon;
  LexiconCase lexicon_case = LexiconCase::kInsensitive;
  double failure_threshold = 0.01;
  bool svg = false;
  RemoteOptions remote;

  // Not hashed: they do not change any output byte.
  std::filesystem::path out = "out";
  unsigned workers = 1;

  // Canonical JSON of the hashed fields.
  nlohmann::json HashedFields() const;
  // 16 lowercase hex digits of a 64-bit hash of HashedFields().
  std::string Hash() const;
  Metadata MakeMetadata(std::string artifact) const;

  std::filesystem::path OutPath(const char* name) const { return out / name; }
};

// Checks numeric ranges; throws ConfigError.
void ValidateConfig(const RunConfig& config);

struct StageResult {
  std::vector<std::filesystem::path> outputs;
  std::vector<std::string> notes;     // one-line summaries for the user
  std::vector<std::string> warnings;
};

StageResult ExtractVocabStage(const RunConfig& config);
StageResult NoiseStage(const RunConfig& config,
                       const std::filesystem::path& vocab);
StageResult ContextStage(const RunConfig& config,
                         const std::filesystem::path& vocab);
StageResult TokStatsStage(const RunConfig& config,
                          const std::filesystem::path& vocab,
                          const std::filesystem::path& pairs);
// Throws TransportError after writing the records file when the share of
// failed probes exceeds config.failure_threshold.
StageResult ProbeStage(const RunConfig& config,
                       const std::filesystem::path& pairs,
                       const std::optional<std::filesystem::path>& contexts);
StageResult ReportStage(const RunConfig& config,
                        const std::filesystem::path& records);

// All stages in order on the default artifact paths. The contextual probe
// runs when `with_context` is set.
StageResult RunPipeline(const RunConfig& config, bool with_context = true);

// In-memory probe used by ProbeStage. Records come back in input order:
// for each pair its no-context probe, then its context probe if `contexts`
// holds the word.
struct ProbeOutput {
  std::vector<SimilarityRecord> records;
  std::vector<ProbeFailure> failures;
  std::vector<nlohmann::json> lines;  // records and failures, in order
};
ProbeOutput ProbePairs(EmbeddingProvider& provider, const Tokenizer& tokenizer,
                       const std::vector<NoisePair>& pairs,
                       const std::vector<ContextWindow>* contexts,
                       unsigned workers);

// Runs fn(i) for i in [0, n) on up to `workers` threads. If any call
// throws, the exception from the smallest index is rethrown.
void ParallelFor(size_t n, unsigned workers, const std::function<void(size_t)>& fn);

}  // namespace orthoprobe

#endif  // ORTHOPROBE_PIPELINE_H_
