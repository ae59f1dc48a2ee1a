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

#include "orthoprobe/corpus.h"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <sstream>
#include <thread>
#include <tuple>

#include <fmt/format.h>

#include "orthoprobe/errors.h"
#include "orthoprobe/noiser.h"
#include "orthoprobe/utf8.h"

namespace orthoprobe {
namespace fs = std::filesystem;
namespace {

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot read '{}'", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError(fmt::format("read failed: '{}'", path.string()));
  return std::move(ss).str();
}

bool IsBlankLine(std::string_view line) {
  size_t pos = 0;
  while (pos < line.size()) {
    if (!utf8::IsWhitespace(utf8::Next(line, pos))) return false;
  }
  return true;
}

void AppendBlankLineDocuments(const std::string& name, const std::string& text,
                              std::vector<CorpusDocument>& out) {
  std::string current;
  size_t block = 0;
  auto flush = [&] {
    if (current.empty()) return;
    out.push_back({fmt::format("{}:{}", name, block++), std::move(current)});
    current.clear();
  };
  size_t pos = 0;
  while (pos < text.size()) {
    size_t nl = text.find('\n', pos);
    size_t end = nl == std::string::npos ? text.size() : nl + 1;
    std::string_view line(text.data() + pos, end - pos);
    if (IsBlankLine(line)) {
      flush();
    } else {
      current.append(line);
    }
    pos = end;
  }
  flush();
}

struct Occurrence {
  size_t doc = 0;
  uint64_t index = 0;
  uint64_t freq = 0;
};

using LocalVocab = std::unordered_map<std::string_view, Occurrence>;

void CountRange(const std::vector<CorpusDocument>& corpus, size_t begin,
                size_t end, size_t min_chars, LocalVocab& out) {
  for (size_t d = begin; d < end; ++d) {
    const auto words = SplitWords(corpus[d].text);
    for (size_t i = 0; i < words.size(); ++i) {
      if (!IsVocabularyWord(words[i], min_chars)) continue;
      auto [it, inserted] = out.try_emplace(words[i], Occurrence{d, i, 0});
      ++it->second.freq;
    }
  }
}

}  // namespace

std::vector<CorpusDocument> LoadCorpus(const fs::path& path, DocumentMode mode) {
  std::error_code ec;
  if (!fs::exists(path, ec)) {
    throw IoError(fmt::format("corpus path does not exist: '{}'", path.string()));
  }
  std::vector<fs::path> files;
  if (fs::is_directory(path, ec)) {
    for (const auto& e : fs::directory_iterator(path)) {
      if (e.is_regular_file()) files.push_back(e.path());
    }
    std::sort(files.begin(), files.end(),
              [](const fs::path& a, const fs::path& b) {
                return a.filename().string() < b.filename().string();
              });
  } else {
    files.push_back(path);
  }

  std::vector<CorpusDocument> docs;
  for (const auto& file : files) {
    std::string text = ReadFile(file);
    const std::string name = file.filename().string();
    utf8::Validate(text, file.string());
    if (mode == DocumentMode::kFile) {
      docs.push_back({name, std::move(text)});
    } else {
      AppendBlankLineDocuments(name, text, docs);
    }
  }
  return docs;
}

std::vector<std::string_view> SplitWords(std::string_view text) {
  std::vector<std::string_view> words;
  size_t pos = 0;
  size_t start = std::string_view::npos;
  while (pos < text.size()) {
    const size_t here = pos;
    const auto c = static_cast<unsigned char>(text[pos]);
    bool space;
    if (c < 0x80) {
      ++pos;
      space = utf8::IsWhitespace(c);
    } else {
      space = utf8::IsWhitespace(utf8::Next(text, pos));
    }
    if (space) {
      if (start != std::string_view::npos) {
        words.push_back(text.substr(start, here - start));
        start = std::string_view::npos;
      }
    } else if (start == std::string_view::npos) {
      start = here;
    }
  }
  if (start != std::string_view::npos) words.push_back(text.substr(start));
  return words;
}

bool IsVocabularyWord(std::string_view word, size_t min_chars) {
  if (word.size() < min_chars || word.empty()) return false;
  return std::all_of(word.begin(), word.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
  });
}

std::vector<VocabEntry> ExtractVocabulary(
    const std::vector<CorpusDocument>& corpus, size_t min_chars,
    unsigned workers) {
  if (min_chars < 1) throw InputError("min_chars must be >= 1");
  workers = std::max(1u, std::min<unsigned>(workers, corpus.size()));

  std::vector<LocalVocab> partial(workers);
  if (workers == 1) {
    CountRange(corpus, 0, corpus.size(), min_chars, partial[0]);
  } else {
    std::vector<std::jthread> threads;
    const size_t chunk = (corpus.size() + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const size_t b = std::min(corpus.size(), w * chunk);
      const size_t e = std::min(corpus.size(), b + chunk);
      threads.emplace_back([&, w, b, e] {
        CountRange(corpus, b, e, min_chars, partial[w]);
      });
    }
  }

  LocalVocab merged = std::move(partial[0]);
  for (size_t w = 1; w < partial.size(); ++w) {
    for (const auto& [word, occ] : partial[w]) {
      auto [it, inserted] = merged.try_emplace(word, occ);
      if (inserted) continue;
      auto& cur = it->second;
      if (std::tie(occ.doc, occ.index) < std::tie(cur.doc, cur.index)) {
        cur.doc = occ.doc;
        cur.index = occ.index;
      }
      cur.freq += occ.freq;
    }
  }

  std::vector<std::pair<std::string_view, Occurrence>> ordered(merged.begin(),
                                                               merged.end());
  std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
    return std::tie(a.second.doc, a.second.index) <
           std::tie(b.second.doc, b.second.index);
  });
  std::vector<VocabEntry> out;
  out.reserve(ordered.size());
  for (const auto& [word, occ] : ordered) {
    out.push_back({std::string(word), corpus[occ.doc].id, occ.index, occ.freq});
  }
  return out;
}

std::unordered_set<std::string> LoadLexicon(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot read lexicon '{}'", path.string()));
  std::unordered_set<std::string> lexicon;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r\n");
    lexicon.insert(line.substr(first, last - first + 1));
  }
  return lexicon;
}

namespace {

std::string AsciiLower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

}  // namespace

std::vector<VocabEntry> FilterLexicon(
    const std::vector<VocabEntry>& vocab,
    const std::unordered_set<std::string>& lexicon, LexiconCase rule) {
  if (lexicon.empty()) throw ConfigError("lexicon is empty");
  std::vector<VocabEntry> out;
  if (rule == LexiconCase::kSensitive) {
    for (const auto& e : vocab) {
      if (lexicon.contains(e.word)) out.push_back(e);
    }
    return out;
  }
  std::unordered_set<std::string> folded;
  folded.reserve(lexicon.size());
  for (const auto& w : lexicon) folded.insert(AsciiLower(w));
  for (const auto& e : vocab) {
    if (folded.contains(AsciiLower(e.word))) out.push_back(e);
  }
  return out;
}

CorpusIndex::CorpusIndex(const std::vector<CorpusDocument>& corpus) {
  docs_.reserve(corpus.size());
  for (size_t d = 0; d < corpus.size(); ++d) {
    docs_.push_back({corpus[d].id, SplitWords(corpus[d].text)});
    by_id_.emplace(corpus[d].id, d);
  }
}

ContextWindow CorpusIndex::Cut(const Doc& doc, size_t at, size_t window) const {
  const size_t total = doc.words.size();
  ContextWindow ctx;
  size_t start = 0;
  size_t count = total;
  if (total <= window) {
    ctx.truncated = total < window;
  } else {
    count = window;
    start = at >= window / 2 ? at - window / 2 : 0;
    start = std::min(start, total - window);
  }
  ctx.word = std::string(doc.words[at]);
  ctx.target_index = at - start;
  ctx.words.reserve(count);
  size_t chars = 0;
  for (size_t i = start; i < start + count; ++i) {
    if (i > start) {
      ctx.text.push_back(' ');
      ++chars;
    }
    const size_t len = utf8::Length(doc.words[i]);
    if (i == at) ctx.target_span = {chars, chars + len};
    chars += len;
    ctx.text.append(doc.words[i]);
    ctx.words.emplace_back(doc.words[i]);
  }
  return ctx;
}

ContextWindow CorpusIndex::Extract(const VocabEntry& entry,
                                   size_t window) const {
  if (window < 1) throw InputError("context window must be >= 1");
  if (auto it = by_id_.find(entry.doc); it != by_id_.end()) {
    const Doc& doc = docs_[it->second];
    if (entry.index < doc.words.size() && doc.words[entry.index] == entry.word) {
      return Cut(doc, entry.index, window);
    }
  }
  for (const Doc& doc : docs_) {
    auto hit = std::find(doc.words.begin(), doc.words.end(), entry.word);
    if (hit != doc.words.end()) {
      return Cut(doc, static_cast<size_t>(hit - doc.words.begin()), window);
    }
  }
  throw LookupError(fmt::format("word '{}' does not occur in the corpus",
                                entry.word));
}

ContextWindow ExtractContext(const std::vector<CorpusDocument>& corpus,
                             const VocabEntry& entry, size_t window) {
  return CorpusIndex(corpus).Extract(entry, window);
}

std::string ApplyEditToContext(const ContextWindow& context,
                               const NoisePair& pair) {
  if (context.target_index >= context.words.size() ||
      context.words[context.target_index] != pair.original) {
    throw ConsistencyError(fmt::format(
        "context target does not match noise pair original '{}'",
        pair.original));
  }
  if (pair.position >= context.target_span.size()) {
    throw ConsistencyError(fmt::format(
        "edit position {} outside target '{}'", pair.position, pair.original));
  }
  const auto table = utf8::CharToByteTable(context.text);
  const size_t ch = context.target_span.start + pair.position;
  if (ch + 1 >= table.size()) {
    throw ConsistencyError("target span lies outside the context text");
  }
  const size_t byte = table[ch];
  if (context.text[byte] != pair.original_char || table[ch + 1] != byte + 1) {
    throw ConsistencyError(fmt::format(
        "context text does not hold '{}' at the edit position",
        pair.original_char));
  }
  std::string edited = context.text;
  edited[byte] = pair.replacement_char;
  return edited;
}

}  // namespace orthoprobe
