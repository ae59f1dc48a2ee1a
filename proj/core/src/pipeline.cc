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

#include "orthoprobe/pipeline.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>
#include <unordered_map>
#include <variant>

#include <fmt/format.h>

#include "orthoprobe/analysis.h"
#include "orthoprobe/embed.h"
#include "orthoprobe/errors.h"
#include "orthoprobe/metrics.h"
#include "orthoprobe/noiser.h"
#include "orthoprobe/report.h"
#include "orthoprobe/rng.h"

namespace orthoprobe {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string JsonlText(const Metadata& meta, const std::vector<json>& lines) {
  std::ostringstream out;
  JsonlWriter writer(out, meta);
  for (const auto& j : lines) writer.Write(j);
  return std::move(out).str();
}

std::shared_ptr<Tokenizer> OpenTokenizer(const RunConfig& config) {
  if (config.tokenizer.vocab_file.empty()) {
    throw ConfigError("no tokenizer configured (set --vocab-file)");
  }
  return LoadTokenizer(config.tokenizer);
}

void AddTokenizerWarnings(const Tokenizer& tok, StageResult& result) {
  for (const auto& w : tok.warnings()) result.warnings.push_back(w);
}

std::vector<CorpusDocument> OpenCorpus(const RunConfig& config) {
  if (config.corpus.empty()) throw ConfigError("no corpus configured (set --corpus)");
  return LoadCorpus(config.corpus, config.doc_mode);
}

}  // namespace

json RunConfig::HashedFields() const {
  return json{
      {"corpus", corpus.generic_string()},
      {"doc_mode", doc_mode == DocumentMode::kFile ? "file" : "blank-line"},
      {"min_chars", min_chars},
      {"seed", seed},
      {"window", window},
      {"tokenizer",
       {{"kind", ToString(tokenizer.kind)},
        {"vocab_file", tokenizer.vocab_file.generic_string()},
        {"merges_file", tokenizer.merges_file.generic_string()}}},
      {"word_initial", word_initial},
      {"provider", provider},
      {"alpha", alpha},
      {"reference_dimension", reference_dimension},
      {"max_bin", max_bin},
      {"ci_level", ci_level},
      {"lexicon", lexicon ? lexicon->generic_string() : ""},
      {"lexicon_case",
       lexicon_case == LexiconCase::kInsensitive ? "insensitive" : "sensitive"},
      {"failure_threshold", failure_threshold},
      {"svg", svg},
  };
}

std::string RunConfig::Hash() const {
  return fmt::format("{:016x}", Mix64(Fnv1a64(HashedFields().dump())));
}

Metadata RunConfig::MakeMetadata(std::string artifact) const {
  Metadata m;
  m.artifact = std::move(artifact);
  m.config_hash = Hash();
  m.seed = seed;
  return m;
}

void ValidateConfig(const RunConfig& c) {
  if (c.min_chars == 0) throw ConfigError("min_chars must be at least 1");
  if (c.window == 0) throw ConfigError("window must be at least 1");
  if (c.max_bin == 0) throw ConfigError("max_bin must be at least 1");
  if (!(c.alpha >= 0.0 && c.alpha < 1.0)) {
    throw ConfigError(fmt::format("alpha {} outside [0, 1)", c.alpha));
  }
  if (!(c.ci_level > 0.0 && c.ci_level < 1.0)) {
    throw ConfigError(fmt::format("ci_level {} outside (0, 1)", c.ci_level));
  }
  if (!(c.failure_threshold >= 0.0 && c.failure_threshold <= 1.0)) {
    throw ConfigError(fmt::format("failure_threshold {} outside [0, 1]",
                                  c.failure_threshold));
  }
  if (c.reference_dimension == 0) {
    throw ConfigError("reference_dimension must be positive");
  }
  if (c.workers == 0) throw ConfigError("workers must be at least 1");
  if (c.remote.retry.attempts < 1) throw ConfigError("retries must be at least 1");
  for (const fs::path* p : {&c.corpus, &c.tokenizer.vocab_file, &c.tokenizer.merges_file}) {
    if (!p->empty() && !fs::exists(*p)) {
      throw ConfigError(fmt::format("path '{}' does not exist", p->string()));
    }
  }
  if (c.lexicon && !fs::exists(*c.lexicon)) {
    throw ConfigError(fmt::format("lexicon '{}' does not exist", c.lexicon->string()));
  }
}

void ParallelFor(size_t n, unsigned workers, const std::function<void(size_t)>& fn) {
  if (workers <= 1 || n <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::atomic<bool> stop{false};
  std::mutex mu;
  size_t failed_at = SIZE_MAX;
  std::exception_ptr failure;
  {
    std::vector<std::jthread> pool;
    const size_t threads = std::min<size_t>(workers, n);
    for (size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        while (!stop.load()) {
          const size_t i = next.fetch_add(1);
          if (i >= n) return;
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(mu);
            if (i < failed_at) {
              failed_at = i;
              failure = std::current_exception();
            }
            stop.store(true);
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

StageResult ExtractVocabStage(const RunConfig& config) {
  ValidateConfig(config);
  const auto corpus = OpenCorpus(config);
  auto vocab = ExtractVocabulary(corpus, config.min_chars, config.workers);
  StageResult result;
  result.notes.push_back(fmt::format("{} documents, {} vocabulary words",
                                     corpus.size(), vocab.size()));
  if (config.lexicon) {
    vocab = FilterLexicon(vocab, LoadLexicon(*config.lexicon), config.lexicon_case);
    result.notes.push_back(fmt::format("{} words kept by the lexicon", vocab.size()));
  }
  std::vector<json> lines;
  lines.reserve(vocab.size());
  for (const auto& e : vocab) lines.push_back(ToJson(e));
  const fs::path out = config.OutPath(artifacts::kVocab);
  WriteFileAtomically(out, JsonlText(config.MakeMetadata("vocab"), lines));
  result.outputs.push_back(out);
  return result;
}

StageResult NoiseStage(const RunConfig& config, const fs::path& vocab_path) {
  ValidateConfig(config);
  const auto vocab = ReadVocab(vocab_path);
  std::vector<json> lines(vocab.size());
  ParallelFor(vocab.size(), config.workers, [&](size_t i) {
    NoisePair p = NoiseWord(vocab[i].word, DeriveSeed(config.seed, vocab[i].word));
    ValidateNoisePair(p);
    lines[i] = ToJson(p);
  });
  const fs::path out = config.OutPath(artifacts::kPairs);
  WriteFileAtomically(out, JsonlText(config.MakeMetadata("pairs"), lines));
  StageResult result;
  result.outputs.push_back(out);
  result.notes.push_back(fmt::format("{} noise pairs", lines.size()));
  return result;
}

StageResult ContextStage(const RunConfig& config, const fs::path& vocab_path) {
  ValidateConfig(config);
  const auto vocab = ReadVocab(vocab_path);
  const auto corpus = OpenCorpus(config);
  const CorpusIndex index(corpus);
  std::vector<std::optional<json>> found(vocab.size());
  ParallelFor(vocab.size(), config.workers, [&](size_t i) {
    try {
      found[i] = ToJson(index.Extract(vocab[i], config.window));
    } catch (const LookupError&) {
      // Reported below.
    }
  });
  StageResult result;
  std::vector<json> lines;
  size_t missing = 0;
  for (size_t i = 0; i < found.size(); ++i) {
    if (found[i]) {
      lines.push_back(std::move(*found[i]));
    } else {
      ++missing;
      if (missing <= 10) {
        result.warnings.push_back(
            fmt::format("no occurrence of '{}' in the corpus", vocab[i].word));
      }
    }
  }
  if (missing > 10) {
    result.warnings.push_back(fmt::format("{} more words without an occurrence",
                                          missing - 10));
  }
  const fs::path out = config.OutPath(artifacts::kContexts);
  WriteFileAtomically(out, JsonlText(config.MakeMetadata("contexts"), lines));
  result.outputs.push_back(out);
  result.notes.push_back(fmt::format("{} contexts of up to {} words", lines.size(),
                                     config.window));
  return result;
}

StageResult TokStatsStage(const RunConfig& config, const fs::path& vocab_path,
                          const fs::path& pairs_path) {
  ValidateConfig(config);
  const auto tokenizer = OpenTokenizer(config);
  std::vector<std::string> originals, edited;
  for (auto& e : ReadVocab(vocab_path)) originals.push_back(std::move(e.word));
  for (auto& p : ReadPairs(pairs_path)) edited.push_back(std::move(p.edited));
  if (originals.empty()) throw InputError("vocabulary file holds no words");
  if (edited.empty()) throw InputError("pairs file holds no pairs");
  const LengthHistogram a =
      LengthDistribution(originals, *tokenizer, config.word_initial, false);
  const LengthHistogram b =
      LengthDistribution(edited, *tokenizer, config.word_initial, true);
  const DistributionComparison cmp = CompareDistributions(a, b);

  StageResult result;
  AddTokenizerWarnings(*tokenizer, result);
  const fs::path lengths = config.OutPath(artifacts::kLengths);
  const fs::path summary = config.OutPath(artifacts::kLengthsSummary);
  WriteFileAtomically(lengths, HistogramCsv(a, b, config.MakeMetadata("lengths")));
  WriteFileAtomically(summary,
                      ComparisonCsv(cmp, config.MakeMetadata("lengths_summary")));
  result.outputs = {lengths, summary};
  if (config.svg) {
    const fs::path svg = config.OutPath(artifacts::kLengthsSvg);
    WriteFileAtomically(svg, HistogramSvg(a, b, config.MakeMetadata("lengths")));
    result.outputs.push_back(svg);
  }
  result.notes.push_back(fmt::format(
      "mean token length {:.4f} -> {:.4f}; share with >= 3 tokens {:.4f} -> {:.4f}",
      cmp.original.mean, cmp.noised.mean, cmp.original.share_ge3,
      cmp.noised.share_ge3));
  return result;
}

ProbeOutput ProbePairs(EmbeddingProvider& provider, const Tokenizer& tokenizer,
                       const std::vector<NoisePair>& pairs,
                       const std::vector<ContextWindow>* contexts,
                       unsigned workers) {
  std::unordered_map<std::string_view, const ContextWindow*> by_word;
  if (contexts) {
    for (const auto& c : *contexts) by_word.emplace(c.word, &c);
  }
  struct Job {
    size_t pair;
    const ContextWindow* context;  // null: no-context probe
  };
  std::vector<Job> jobs;
  for (size_t i = 0; i < pairs.size(); ++i) {
    jobs.push_back({i, nullptr});
    if (auto it = by_word.find(pairs[i].original); it != by_word.end()) {
      jobs.push_back({i, it->second});
    }
  }

  // Non-owning alias for the Embedder's dimension check.
  Embedder embedder(std::shared_ptr<EmbeddingProvider>(
      std::shared_ptr<void>(), &provider));
  const std::string tag = provider.tag();
  const bool standalone_initial = tokenizer.StandaloneIsWordInitial();
  std::vector<std::variant<SimilarityRecord, ProbeFailure>> results(jobs.size());
  const unsigned threads = static_cast<unsigned>(
      std::min<size_t>(workers, std::max<size_t>(provider.max_in_flight(), 1)));

  ParallelFor(jobs.size(), threads, [&](size_t k) {
    const Job& job = jobs[k];
    const NoisePair& pair = pairs[job.pair];
    const bool ctx = job.context != nullptr;
    try {
      auto [a, b] = ctx ? ProbePairContext(embedder, *job.context, pair)
                        : ProbePairNoContext(embedder, pair);
      const SimilarityScore score = Similarity(a.values, b.values);
      SimilarityRecord r;
      r.word = pair.original;
      r.edited = pair.edited;
      r.token_length =
          TokenLength(tokenizer, pair.original, ctx ? true : standalone_initial);
      r.cosine = score.cosine;
      r.spearman = score.spearman;
      r.with_context = ctx;
      r.model_tag = tag;
      results[k] = std::move(r);
    } catch (const ProtocolError& e) {
      results[k] = ProbeFailure{pair.original, pair.edited, ctx, tag, e.what()};
    } catch (const TransportError& e) {
      results[k] = ProbeFailure{pair.original, pair.edited, ctx, tag, e.what()};
    } catch (const CoverageError& e) {
      results[k] = ProbeFailure{pair.original, pair.edited, ctx, tag, e.what()};
    }
  });

  ProbeOutput out;
  for (auto& r : results) {
    if (auto* rec = std::get_if<SimilarityRecord>(&r)) {
      out.lines.push_back(ToJson(*rec));
      out.records.push_back(std::move(*rec));
    } else {
      auto& f = std::get<ProbeFailure>(r);
      out.lines.push_back(ToJson(f));
      out.failures.push_back(std::move(f));
    }
  }
  return out;
}

StageResult ProbeStage(const RunConfig& config, const fs::path& pairs_path,
                       const std::optional<fs::path>& contexts_path) {
  ValidateConfig(config);
  std::shared_ptr<const Tokenizer> tokenizer = OpenTokenizer(config);
  const auto pairs = ReadPairs(pairs_path);
  std::optional<std::vector<ContextWindow>> contexts;
  if (contexts_path) contexts = ReadContexts(*contexts_path);

  ProviderSettings settings;
  settings.selection = config.provider;
  settings.tokenizer = tokenizer;
  settings.alpha = config.alpha;
  settings.seed = config.seed;
  settings.reference_dimension = config.reference_dimension;
  settings.remote = config.remote;
  const auto provider = MakeProvider(settings);

  ProbeOutput probed = ProbePairs(*provider, *tokenizer, pairs,
                                  contexts ? &*contexts : nullptr, config.workers);
  const fs::path out = config.OutPath(artifacts::kRecords);
  WriteFileAtomically(out, JsonlText(config.MakeMetadata("records"), probed.lines));

  StageResult result;
  AddTokenizerWarnings(*tokenizer, result);
  result.outputs.push_back(out);
  const size_t total = probed.lines.size();
  result.notes.push_back(fmt::format("{} records, {} failures", probed.records.size(),
                                     probed.failures.size()));
  for (size_t i = 0; i < probed.failures.size() && i < 5; ++i) {
    result.warnings.push_back(fmt::format("probe of '{}' failed: {}",
                                          probed.failures[i].word,
                                          probed.failures[i].error));
  }
  const double rate =
      total == 0 ? 0.0 : static_cast<double>(probed.failures.size()) / total;
  if (rate > config.failure_threshold) {
    throw TransportError(fmt::format(
        "{} of {} probes failed ({:.2f}%), above the {:.2f}% threshold; "
        "records written to {}",
        probed.failures.size(), total, 100 * rate, 100 * config.failure_threshold,
        out.string()));
  }
  return result;
}

StageResult ReportStage(const RunConfig& config, const fs::path& records_path) {
  ValidateConfig(config);
  const RecordsFile file = ReadRecords(records_path);
  StageResult result;
  if (file.records.empty()) {
    result.warnings.push_back("no similarity records; the report has no rows");
  }
  if (!file.failures.empty()) {
    result.warnings.push_back(fmt::format("{} failed probes are not in the report",
                                          file.failures.size()));
  }
  std::vector<std::string_view> tags;
  for (const auto& r : file.records) {
    if (std::find(tags.begin(), tags.end(), r.model_tag) == tags.end()) {
      tags.push_back(r.model_tag);
    }
  }
  if (tags.size() > 1) {
    result.warnings.push_back(fmt::format("records mix {} model tags", tags.size()));
  }
  const auto bins = BinRecords(file.records, config.max_bin, config.ci_level);
  const fs::path out = config.OutPath(artifacts::kReport);
  WriteFileAtomically(out, ReportCsv(bins, config.MakeMetadata("report")));
  result.outputs.push_back(out);
  if (config.svg && !bins.empty()) {
    for (Measure m : kMeasures) {
      const fs::path svg = config.out / fmt::format("report_{}.svg", ToString(m));
      WriteFileAtomically(svg, ReportSvg(bins, m, config.MakeMetadata("report")));
      result.outputs.push_back(svg);
    }
  }
  size_t undefined = 0;
  for (const auto& b : bins) undefined += b.undefined_n;
  result.notes.push_back(fmt::format("{} records in {} rows, {} undefined values",
                                     file.records.size(), bins.size(), undefined));
  return result;
}

StageResult RunPipeline(const RunConfig& config, bool with_context) {
  StageResult all;
  auto merge = [&](StageResult r) {
    for (auto& x : r.outputs) all.outputs.push_back(std::move(x));
    for (auto& x : r.notes) all.notes.push_back(std::move(x));
    for (auto& x : r.warnings) all.warnings.push_back(std::move(x));
  };
  const fs::path vocab = config.OutPath(artifacts::kVocab);
  const fs::path pairs = config.OutPath(artifacts::kPairs);
  const fs::path contexts = config.OutPath(artifacts::kContexts);
  merge(ExtractVocabStage(config));
  merge(NoiseStage(config, vocab));
  if (with_context) merge(ContextStage(config, vocab));
  merge(TokStatsStage(config, vocab, pairs));
  merge(ProbeStage(config, pairs,
                   with_context ? std::optional<fs::path>(contexts) : std::nullopt));
  merge(ReportStage(config, config.OutPath(artifacts::kRecords)));
  return all;
}

}  // namespace orthoprobe
