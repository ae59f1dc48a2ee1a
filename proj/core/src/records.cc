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

#include "orthoprobe/records.h"

#include <fstream>

#include <fmt/format.h>

#include "orthoprobe/errors.h"
#include "orthoprobe/utf8.h"

namespace orthoprobe {
namespace {

using nlohmann::json;

const json& Field(const json& j, const char* name) {
  if (!j.is_object()) throw FormatError("expected a JSON object");
  auto it = j.find(name);
  if (it == j.end()) throw FormatError(fmt::format("missing field '{}'", name));
  return *it;
}

std::string String(const json& j, const char* name) {
  const json& f = Field(j, name);
  if (!f.is_string()) throw FormatError(fmt::format("field '{}' must be a string", name));
  return f.get<std::string>();
}

uint64_t Unsigned(const json& j, const char* name) {
  const json& f = Field(j, name);
  if (!f.is_number_unsigned() && !(f.is_number_integer() && f.get<int64_t>() >= 0)) {
    throw FormatError(fmt::format("field '{}' must be a non-negative integer", name));
  }
  return f.get<uint64_t>();
}

bool Bool(const json& j, const char* name) {
  const json& f = Field(j, name);
  if (!f.is_boolean()) throw FormatError(fmt::format("field '{}' must be a boolean", name));
  return f.get<bool>();
}

std::optional<double> NullableNumber(const json& j, const char* name) {
  const json& f = Field(j, name);
  if (f.is_null()) return std::nullopt;
  if (!f.is_number()) {
    throw FormatError(fmt::format("field '{}' must be a number or null", name));
  }
  return f.get<double>();
}

char Letter(const json& j, const char* name) {
  const std::string s = String(j, name);
  if (s.size() != 1) {
    throw FormatError(fmt::format("field '{}' must hold one character", name));
  }
  return s[0];
}

json Nullable(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

json Metadata::ToJson() const {
  return json{{"_meta",
               {{"tool", tool},
                {"version", version},
                {"artifact", artifact},
                {"config_hash", config_hash},
                {"seed", seed}}}};
}

std::string Metadata::CommentLine() const {
  return fmt::format("# {} {} artifact={} config={} seed={}", tool, version,
                     artifact, config_hash, seed);
}

json ToJson(const VocabEntry& e) {
  return json{{"word", e.word}, {"doc", e.doc}, {"index", e.index}, {"freq", e.freq}};
}

json ToJson(const NoisePair& p) {
  return json{{"original", p.original},
              {"edited", p.edited},
              {"position", p.position},
              {"from", std::string(1, p.original_char)},
              {"to", std::string(1, p.replacement_char)},
              {"seed", p.seed}};
}

json ToJson(const ContextWindow& c) {
  return json{{"word", c.word},
              {"words", c.words},
              {"target_index", c.target_index},
              {"text", c.text},
              {"span", {c.target_span.start, c.target_span.end}},
              {"truncated", c.truncated}};
}

json ToJson(const SimilarityRecord& r) {
  return json{{"word", r.word},
              {"edited", r.edited},
              {"token_length", r.token_length},
              {"cosine", Nullable(r.cosine)},
              {"spearman", Nullable(r.spearman)},
              {"with_context", r.with_context},
              {"model_tag", r.model_tag}};
}

json ToJson(const ProbeFailure& f) {
  return json{{"word", f.word},
              {"edited", f.edited},
              {"with_context", f.with_context},
              {"model_tag", f.model_tag},
              {"error", f.error}};
}

json ToJson(std::string_view text, const TokenSequence& seq) {
  json offsets = json::array();
  for (const auto& o : seq.offsets) offsets.push_back({o.start, o.end});
  return json{{"text", text},
              {"tokens", seq.tokens},
              {"ids", seq.ids},
              {"offsets", std::move(offsets)}};
}

VocabEntry VocabEntryFromJson(const json& j) {
  VocabEntry e;
  e.word = String(j, "word");
  e.doc = String(j, "doc");
  e.index = Unsigned(j, "index");
  e.freq = Unsigned(j, "freq");
  if (e.word.empty()) throw FormatError("field 'word' is empty");
  if (e.freq == 0) throw FormatError("field 'freq' must be positive");
  return e;
}

NoisePair NoisePairFromJson(const json& j) {
  NoisePair p;
  p.original = String(j, "original");
  p.edited = String(j, "edited");
  p.position = Unsigned(j, "position");
  p.original_char = Letter(j, "from");
  p.replacement_char = Letter(j, "to");
  p.seed = Unsigned(j, "seed");
  // Structural checks only; a bypass pair with edited == original is legal
  // input to the probe.
  if (p.original.size() != p.edited.size() || p.position >= p.original.size() ||
      p.original[p.position] != p.original_char ||
      p.edited[p.position] != p.replacement_char) {
    throw FormatError(fmt::format("pair '{}' -> '{}' is not a single substitution",
                                  p.original, p.edited));
  }
  for (size_t i = 0; i < p.original.size(); ++i) {
    if (i != p.position && p.original[i] != p.edited[i]) {
      throw FormatError(fmt::format("pair '{}' -> '{}' differs outside position {}",
                                    p.original, p.edited, p.position));
    }
  }
  return p;
}

ContextWindow ContextWindowFromJson(const json& j) {
  ContextWindow c;
  c.word = String(j, "word");
  const json& words = Field(j, "words");
  if (!words.is_array()) throw FormatError("field 'words' must be an array");
  for (const auto& w : words) {
    if (!w.is_string()) throw FormatError("field 'words' must hold strings");
    c.words.push_back(w.get<std::string>());
  }
  c.target_index = Unsigned(j, "target_index");
  c.text = String(j, "text");
  const json& span = Field(j, "span");
  if (!span.is_array() || span.size() != 2 || !span[0].is_number_unsigned() ||
      !span[1].is_number_unsigned()) {
    throw FormatError("field 'span' must be [start, end]");
  }
  c.target_span = {span[0].get<size_t>(), span[1].get<size_t>()};
  if (j.contains("truncated")) c.truncated = Bool(j, "truncated");
  if (c.target_index >= c.words.size() || c.words[c.target_index] != c.word) {
    throw FormatError(fmt::format("context for '{}' does not hold it at target_index",
                                  c.word));
  }
  if (c.target_span.end < c.target_span.start ||
      c.target_span.end > utf8::Length(c.text)) {
    throw FormatError(fmt::format("context for '{}' has a span outside its text",
                                  c.word));
  }
  return c;
}

SimilarityRecord SimilarityRecordFromJson(const json& j) {
  SimilarityRecord r;
  r.word = String(j, "word");
  r.edited = String(j, "edited");
  r.token_length = Unsigned(j, "token_length");
  if (r.token_length == 0) throw FormatError("field 'token_length' must be positive");
  r.cosine = NullableNumber(j, "cosine");
  r.spearman = NullableNumber(j, "spearman");
  r.with_context = Bool(j, "with_context");
  r.model_tag = String(j, "model_tag");
  return r;
}

ProbeFailure ProbeFailureFromJson(const json& j) {
  ProbeFailure f;
  f.word = String(j, "word");
  f.edited = String(j, "edited");
  f.with_context = Bool(j, "with_context");
  f.model_tag = String(j, "model_tag");
  f.error = String(j, "error");
  return f;
}

JsonlWriter::JsonlWriter(std::ostream& out, const Metadata& meta) : out_(out) {
  Write(meta.ToJson());
}

void JsonlWriter::Write(const json& j) {
  out_ << j.dump(-1, ' ', false, json::error_handler_t::strict) << '\n';
}

void ReadJsonl(const std::filesystem::path& path,
               const std::function<void(const json&, size_t)>& fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot read '{}'", path.string()));
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw FormatError(fmt::format("{}: line {}: malformed JSON ({})",
                                    path.string(), line_no, e.what()));
    }
    if (j.is_object() && j.contains("_meta")) continue;
    try {
      fn(j, line_no);
    } catch (const FormatError& e) {
      throw FormatError(fmt::format("{}: line {}: {}", path.string(), line_no,
                                    e.what()));
    }
  }
}

std::optional<json> ReadJsonlMetadata(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot read '{}'", path.string()));
  std::string line;
  if (!std::getline(in, line)) return std::nullopt;
  json j = json::parse(line, nullptr, false);
  if (j.is_object() && j.contains("_meta")) return j["_meta"];
  return std::nullopt;
}

std::vector<VocabEntry> ReadVocab(const std::filesystem::path& path) {
  std::vector<VocabEntry> out;
  ReadJsonl(path, [&](const json& j, size_t) {
    out.push_back(VocabEntryFromJson(j));
  });
  return out;
}

std::vector<NoisePair> ReadPairs(const std::filesystem::path& path) {
  std::vector<NoisePair> out;
  ReadJsonl(path, [&](const json& j, size_t) {
    out.push_back(NoisePairFromJson(j));
  });
  return out;
}

std::vector<ContextWindow> ReadContexts(const std::filesystem::path& path) {
  std::vector<ContextWindow> out;
  ReadJsonl(path, [&](const json& j, size_t) {
    out.push_back(ContextWindowFromJson(j));
  });
  return out;
}

RecordsFile ReadRecords(const std::filesystem::path& path) {
  RecordsFile out;
  ReadJsonl(path, [&](const json& j, size_t) {
    if (j.is_object() && j.contains("error")) {
      out.failures.push_back(ProbeFailureFromJson(j));
    } else {
      out.records.push_back(SimilarityRecordFromJson(j));
    }
  });
  return out;
}

void WriteFileAtomically(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(fmt::format("cannot write '{}'", tmp.string()));
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw IoError(fmt::format("write to '{}' failed", tmp.string()));
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw IoError(fmt::format("cannot rename '{}' to '{}': {}", tmp.string(),
                              path.string(), ec.message()));
  }
}

}  // namespace orthoprobe
