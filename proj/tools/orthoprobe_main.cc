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

// orthoprobe: command-line driver for the pipeline stages.
//
// Settings come from, in increasing precedence: built-in defaults, the
// TOML/INI file given with --config, and command-line flags.

#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <httplib.h>

#include "orthoprobe/embed.h"
#include "orthoprobe/errors.h"
#include "orthoprobe/pipeline.h"
#include "orthoprobe/providers.h"
#include "orthoprobe/records.h"

namespace orthoprobe {
namespace {

namespace fs = std::filesystem;

struct Flags {
  RunConfig config;
  std::string tokenizer_kind = "byte-level-bpe";
  std::string doc_mode = "file";
  std::string lexicon;
  std::string lexicon_case = "insensitive";
  int64_t timeout_ms = 60000;
  int64_t backoff_ms = 200;

  // Stage inputs; empty means the artifact in --out.
  std::string vocab_in, pairs_in, contexts_in, records_in;
  bool no_context = false;

  // tokenize
  std::vector<std::string> texts;
  bool as_word = false;

  // serve-reference
  int port = -1;
  std::string host = "127.0.0.1";
  std::string path = "/embed";
};

void Finish(Flags& f) {
  RunConfig& c = f.config;
  c.tokenizer.kind = ParseTokenizerKind(f.tokenizer_kind);
  if (f.doc_mode == "file") {
    c.doc_mode = DocumentMode::kFile;
  } else if (f.doc_mode == "blank-line") {
    c.doc_mode = DocumentMode::kBlankLine;
  } else {
    throw ConfigError(fmt::format("unknown doc-mode '{}' (file or blank-line)",
                                  f.doc_mode));
  }
  if (!f.lexicon.empty()) c.lexicon = f.lexicon;
  if (f.lexicon_case == "insensitive") {
    c.lexicon_case = LexiconCase::kInsensitive;
  } else if (f.lexicon_case == "sensitive") {
    c.lexicon_case = LexiconCase::kSensitive;
  } else {
    throw ConfigError(fmt::format(
        "unknown lexicon-case '{}' (insensitive or sensitive)", f.lexicon_case));
  }
  if (f.timeout_ms <= 0 || f.backoff_ms < 0) {
    throw ConfigError("timeout-ms must be positive and backoff-ms non-negative");
  }
  c.remote.timeout = std::chrono::milliseconds(f.timeout_ms);
  c.remote.retry.initial_backoff = std::chrono::milliseconds(f.backoff_ms);
  ValidateConfig(c);
}

fs::path Input(const Flags& f, const std::string& given, const char* artifact) {
  return given.empty() ? f.config.OutPath(artifact) : fs::path(given);
}

void Print(std::string_view command, const StageResult& r) {
  for (const auto& w : r.warnings) {
    std::cerr << "orthoprobe " << command << ": warning: " << w << '\n';
  }
  for (const auto& n : r.notes) std::cerr << "orthoprobe " << command << ": " << n << '\n';
  for (const auto& p : r.outputs) {
    std::cerr << "orthoprobe " << command << ": wrote " << p.string() << '\n';
  }
}

int Tokenize(const Flags& f) {
  if (f.config.tokenizer.vocab_file.empty()) {
    throw ConfigError("no tokenizer configured (set --vocab-file)");
  }
  const auto tok = LoadTokenizer(f.config.tokenizer);
  std::vector<std::string> texts = f.texts;
  if (texts.empty()) {
    for (std::string line; std::getline(std::cin, line);) texts.push_back(line);
  }
  for (const auto& t : texts) {
    const TokenSequence seq =
        f.as_word ? tok->EncodeWord(t, f.config.word_initial) : tok->Encode(t);
    std::cout << ToJson(t, seq).dump() << '\n';
  }
  return 0;
}

// Answers wire-protocol requests with reference-provider states, on
// stdin/stdout or over HTTP.
int ServeReference(const Flags& f) {
  if (f.config.tokenizer.vocab_file.empty()) {
    throw ConfigError("no tokenizer configured (set --vocab-file)");
  }
  std::shared_ptr<const Tokenizer> tok = LoadTokenizer(f.config.tokenizer);
  ReferenceProvider provider(tok, f.config.alpha, f.config.seed,
                             f.config.reference_dimension);
  auto answer = [&](const std::string& body) {
    const auto j = nlohmann::json::parse(body);
    ProviderRequest req{j.at("id").get<std::string>(), j.at("text").get<std::string>()};
    return MakeProviderResponse(req, provider.Embed(req.text)).dump();
  };
  if (f.port < 0) {
    for (std::string line; std::getline(std::cin, line);) {
      if (line.empty()) continue;
      std::cout << answer(line) << '\n' << std::flush;
    }
    return 0;
  }
  httplib::Server server;
  server.Post(f.path, [&](const httplib::Request& req, httplib::Response& res) {
    try {
      res.set_content(answer(req.body), "application/json");
    } catch (const std::exception& e) {
      res.status = 400;
      res.set_content(e.what(), "text/plain");
    }
  });
  int port = f.port;
  if (port == 0) {
    port = server.bind_to_any_port(f.host);
  } else if (!server.bind_to_port(f.host, port)) {
    port = -1;
  }
  if (port < 0) throw TransportError(fmt::format("cannot listen on {}:{}", f.host, f.port));
  std::cout << fmt::format("listening on http://{}:{}{}", f.host, port, f.path)
            << std::endl;
  server.listen_after_bind();
  return 0;
}

int Main(int argc, char** argv) {
  CLI::App app{"Probe how single-character noise moves contextual word embeddings",
               "orthoprobe"};
  app.set_version_flag("--version", std::string("orthoprobe ") + ORTHOPROBE_VERSION);
  app.set_config("--config", "", "TOML/INI run configuration; flags override it");
  app.require_subcommand(1);
  app.fallthrough();

  Flags f;
  RunConfig& c = f.config;
  std::string vocab_file, merges_file, corpus, out = c.out.string();
  app.add_option("--corpus", corpus, "Corpus file or directory");
  app.add_option("--doc-mode", f.doc_mode, "file | blank-line")->capture_default_str();
  app.add_option("--min-chars", c.min_chars, "Minimum vocabulary word length")
      ->capture_default_str();
  app.add_option("--seed", c.seed, "Global seed")->capture_default_str();
  app.add_option("--window", c.window, "Context window in words")->capture_default_str();
  app.add_option("--tokenizer-kind", f.tokenizer_kind,
                 "byte-level-bpe | wordpiece | unigram")
      ->capture_default_str();
  app.add_option("--vocab-file", vocab_file,
                 "vocab.json, vocab.txt or unigram TSV");
  app.add_option("--merges-file", merges_file, "merges.txt (byte-level BPE)");
  app.add_option("--word-initial", c.word_initial,
                 "Token lengths of words as they appear after a space")
      ->capture_default_str();
  app.add_option("--provider", c.provider, "reference | exec:<cmd> | http:<url>")
      ->capture_default_str();
  app.add_option("--alpha", c.alpha, "Reference provider context mixing")
      ->capture_default_str();
  app.add_option("--reference-dim", c.reference_dimension,
                 "Reference provider dimension")
      ->capture_default_str();
  app.add_option("--max-bin", c.max_bin, "Last single-length bin")->capture_default_str();
  app.add_option("--ci-level", c.ci_level, "Confidence level")->capture_default_str();
  app.add_option("--lexicon", f.lexicon, "Newline-delimited word list");
  app.add_option("--lexicon-case", f.lexicon_case, "insensitive | sensitive")
      ->capture_default_str();
  app.add_option("--failure-threshold", c.failure_threshold,
                 "Largest tolerated share of failed probes")
      ->capture_default_str();
  app.add_flag("--svg", c.svg, "Also write SVG plots");
  app.add_option("--timeout-ms", f.timeout_ms, "Provider request timeout")
      ->capture_default_str();
  app.add_option("--retries", c.remote.retry.attempts, "Provider attempts per request")
      ->capture_default_str();
  app.add_option("--backoff-ms", f.backoff_ms, "First retry delay, doubled each time")
      ->capture_default_str();
  app.add_option("--max-in-flight", c.remote.max_in_flight,
                 "Concurrent HTTP provider requests")
      ->capture_default_str();
  app.add_option("--out", out, "Output directory")->capture_default_str();
  app.add_option("--workers", c.workers, "Worker threads")->capture_default_str();

  auto* extract = app.add_subcommand("extract-vocab", "Corpus -> vocab.jsonl");
  auto* noise = app.add_subcommand("noise", "vocab.jsonl -> pairs.jsonl");
  noise->add_option("--vocab", f.vocab_in, "Vocabulary input");
  auto* context = app.add_subcommand("context", "vocab.jsonl -> contexts.jsonl");
  context->add_option("--vocab", f.vocab_in, "Vocabulary input");
  auto* tok_stats = app.add_subcommand("tok-stats", "Token-length histograms");
  tok_stats->add_option("--vocab", f.vocab_in, "Vocabulary input");
  tok_stats->add_option("--pairs", f.pairs_in, "Noise pairs input");
  auto* probe = app.add_subcommand("probe", "pairs [+ contexts] -> records.jsonl");
  probe->add_option("--pairs", f.pairs_in, "Noise pairs input");
  probe->add_option("--contexts", f.contexts_in,
                    "Contexts input; without it only the no-context probe runs");
  auto* report = app.add_subcommand("report", "records.jsonl -> report.csv");
  report->add_option("--records", f.records_in, "Records input");
  auto* run = app.add_subcommand("run", "All stages in order");
  run->add_flag("--no-context", f.no_context, "Skip contexts and the contextual probe");
  auto* tokenize = app.add_subcommand("tokenize", "Print tokens as JSON lines");
  tokenize->add_option("text", f.texts, "Texts (default: lines of stdin)");
  tokenize->add_flag("--word", f.as_word, "Encode each text as one word");
  auto* serve = app.add_subcommand(
      "serve-reference", "Answer provider requests with reference states");
  serve->add_option("--port", f.port, "HTTP port (0 picks one); default stdio");
  serve->add_option("--host", f.host, "HTTP bind address")->capture_default_str();
  serve->add_option("--path", f.path, "HTTP endpoint path")->capture_default_str();
  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ExitCode::kUsage);
  }

  c.corpus = corpus;
  c.tokenizer.vocab_file = vocab_file;
  c.tokenizer.merges_file = merges_file;
  c.out = out;
  Finish(f);

  if (*extract) {
    Print("extract-vocab", ExtractVocabStage(c));
  } else if (*noise) {
    Print("noise", NoiseStage(c, Input(f, f.vocab_in, artifacts::kVocab)));
  } else if (*context) {
    Print("context", ContextStage(c, Input(f, f.vocab_in, artifacts::kVocab)));
  } else if (*tok_stats) {
    Print("tok-stats", TokStatsStage(c, Input(f, f.vocab_in, artifacts::kVocab),
                                     Input(f, f.pairs_in, artifacts::kPairs)));
  } else if (*probe) {
    std::optional<fs::path> contexts;
    if (!f.contexts_in.empty()) contexts = f.contexts_in;
    Print("probe", ProbeStage(c, Input(f, f.pairs_in, artifacts::kPairs), contexts));
  } else if (*report) {
    Print("report", ReportStage(c, Input(f, f.records_in, artifacts::kRecords)));
  } else if (*run) {
    Print("run", RunPipeline(c, !f.no_context));
  } else if (*tokenize) {
    return Tokenize(f);
  } else if (*serve) {
    return ServeReference(f);
  }
  return 0;
}

}  // namespace
}  // namespace orthoprobe

int main(int argc, char** argv) {
  try {
    return orthoprobe::Main(argc, argv);
  } catch (const orthoprobe::Error& e) {
    std::cerr << "orthoprobe: error: " << e.what() << '\n';
    return static_cast<int>(e.exit_code());
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "orthoprobe: error: " << e.what() << '\n';
    return static_cast<int>(orthoprobe::ExitCode::kData);
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "orthoprobe: error: " << e.what() << '\n';
    return static_cast<int>(orthoprobe::ExitCode::kData);
  } catch (const std::exception& e) {
    std::cerr << "orthoprobe: error: " << e.what() << '\n';
    return static_cast<int>(orthoprobe::ExitCode::kData);
  }
}
