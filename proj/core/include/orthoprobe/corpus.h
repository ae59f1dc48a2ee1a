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

// Corpus ingestion, test-vocabulary extraction, lexicon filtering and
// fixed-width context windows.
//
// Words are maximal runs of non-whitespace code points (Python
// str.split() semantics). A vocabulary word is a word made only of ASCII
// letters with at least `min_chars` of them; uniqueness is case-sensitive.

#ifndef ORTHOPROBE_CORPUS_H_
#define ORTHOPROBE_CORPUS_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace orthoprobe {

struct NoisePair;

struct CorpusDocument {
  std::string id;
  std::string text;
};

enum class DocumentMode {
  kFile,       // one document per file
  kBlankLine,  // documents separated by whitespace-only lines
};

// Reads a file, or every regular file of a directory in lexicographic
// filename order. Throws IoError / DecodeError.
std::vector<CorpusDocument> LoadCorpus(const std::filesystem::path& path,
                                       DocumentMode mode = DocumentMode::kFile);

// Splits `text` on Unicode whitespace; the views point into `text`.
std::vector<std::string_view> SplitWords(std::string_view text);

// True iff `word` is at least `min_chars` ASCII letters.
bool IsVocabularyWord(std::string_view word, size_t min_chars = 4);

struct VocabEntry {
  std::string word;
  std::string doc;       // id of the document holding the first occurrence
  uint64_t index = 0;    // whitespace-token index inside that document
  uint64_t freq = 0;

  bool operator==(const VocabEntry&) const = default;
};

// Entries come back ordered by first occurrence (document order, then
// token index). `workers` > 1 splits the documents across threads; the
// result does not depend on it.
std::vector<VocabEntry> ExtractVocabulary(
    const std::vector<CorpusDocument>& corpus, size_t min_chars = 4,
    unsigned workers = 1);

enum class LexiconCase { kInsensitive, kSensitive };

// Newline-delimited word list; surrounding whitespace is trimmed and blank
// lines skipped.
std::unordered_set<std::string> LoadLexicon(const std::filesystem::path& path);

// Keeps entries whose word is in `lexicon`. Default membership ignores
// ASCII case. Throws ConfigError on an empty lexicon.
std::vector<VocabEntry> FilterLexicon(
    const std::vector<VocabEntry>& vocab,
    const std::unordered_set<std::string>& lexicon,
    LexiconCase rule = LexiconCase::kInsensitive);

struct CharSpan {
  size_t start = 0;
  size_t end = 0;  // exclusive

  size_t size() const { return end - start; }
  bool operator==(const CharSpan&) const = default;
};

struct ContextWindow {
  std::string word;
  std::vector<std::string> words;
  size_t target_index = 0;
  std::string text;      // words joined by single spaces
  CharSpan target_span;  // code point interval of the target inside text
  bool truncated = false;  // document shorter than the requested window

  bool operator==(const ContextWindow&) const = default;
};

// Pre-split view of a corpus so many windows can be cut without
// re-tokenizing. Holds views into the corpus, which must outlive it.
class CorpusIndex {
 public:
  explicit CorpusIndex(const std::vector<CorpusDocument>& corpus);

  // Window of `window` words around the entry's first occurrence, centered
  // where the document boundaries allow. Falls back to scanning the corpus
  // when the recorded location does not hold the word. Throws LookupError
  // when the word never occurs, InputError when window < 1.
  ContextWindow Extract(const VocabEntry& entry, size_t window = 100) const;

 private:
  struct Doc {
    std::string_view id;
    std::vector<std::string_view> words;
  };
  ContextWindow Cut(const Doc& doc, size_t at, size_t window) const;

  std::vector<Doc> docs_;
  std::unordered_map<std::string_view, size_t> by_id_;
};

ContextWindow ExtractContext(const std::vector<CorpusDocument>& corpus,
                             const VocabEntry& entry, size_t window = 100);

// Rewrites the single character at target_span.start + pair.position.
// Throws ConsistencyError if the window's target is not pair.original.
std::string ApplyEditToContext(const ContextWindow& context,
                               const NoisePair& pair);

}  // namespace orthoprobe

#endif  // ORTHOPROBE_CORPUS_H_
