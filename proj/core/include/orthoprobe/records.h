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

// JSON-lines encodings of the pipeline's intermediate artifacts.
//
// Every file starts with one metadata line, {"_meta": {...}}, naming the
// tool version, config hash and global seed. Readers skip it.

#ifndef ORTHOPROBE_RECORDS_H_
#define ORTHOPROBE_RECORDS_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "orthoprobe/analysis.h"
#include "orthoprobe/corpus.h"
#include "orthoprobe/noiser.h"
#include "orthoprobe/tokenizers/tokenizer.h"

namespace orthoprobe {

struct Metadata {
  std::string tool = "orthoprobe";
  std::string version = ORTHOPROBE_VERSION;
  std::string artifact;     // "vocab", "pairs", "records", ...
  std::string config_hash;  // 16 hex digits
  uint64_t seed = 0;

  nlohmann::json ToJson() const;
  // "# orthoprobe 0.1.0 artifact=report config=... seed=..." for CSV files.
  std::string CommentLine() const;
};

// A probe failure kept in the records file in place of a record.
struct ProbeFailure {
  std::string word;
  std::string edited;
  bool with_context = false;
  std::string model_tag;
  std::string error;
  bool operator==(const ProbeFailure&) const = default;
};

nlohmann::json ToJson(const VocabEntry& e);
nlohmann::json ToJson(const NoisePair& p);
nlohmann::json ToJson(const ContextWindow& c);
nlohmann::json ToJson(const SimilarityRecord& r);
nlohmann::json ToJson(const ProbeFailure& f);
nlohmann::json ToJson(std::string_view text, const TokenSequence& seq);

// Each throws FormatError naming the field when `j` does not fit.
VocabEntry VocabEntryFromJson(const nlohmann::json& j);
NoisePair NoisePairFromJson(const nlohmann::json& j);
ContextWindow ContextWindowFromJson(const nlohmann::json& j);
SimilarityRecord SimilarityRecordFromJson(const nlohmann::json& j);
ProbeFailure ProbeFailureFromJson(const nlohmann::json& j);

// Writes `meta` and then one compact JSON object per line.
class JsonlWriter {
 public:
  JsonlWriter(std::ostream& out, const Metadata& meta);
  void Write(const nlohmann::json& j);

 private:
  std::ostream& out_;
};

// Calls `fn(object, line_number)` for each non-metadata line. Malformed
// JSON, or an exception of type FormatError from `fn`, is rethrown as
// FormatError prefixed with the file name and line number.
void ReadJsonl(const std::filesystem::path& path,
               const std::function<void(const nlohmann::json&, size_t)>& fn);

// Metadata line of a JSON-lines file, if it has one.
std::optional<nlohmann::json> ReadJsonlMetadata(const std::filesystem::path& path);

std::vector<VocabEntry> ReadVocab(const std::filesystem::path& path);
std::vector<NoisePair> ReadPairs(const std::filesystem::path& path);
std::vector<ContextWindow> ReadContexts(const std::filesystem::path& path);

struct RecordsFile {
  std::vector<SimilarityRecord> records;
  std::vector<ProbeFailure> failures;
};
RecordsFile ReadRecords(const std::filesystem::path& path);

// Writes `text` to `path` via a temporary file and rename.
void WriteFileAtomically(const std::filesystem::path& path, std::string_view text);

}  // namespace orthoprobe

#endif  // ORTHOPROBE_RECORDS_H_
