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

// External embedding providers speaking a small JSON protocol.
//
//   request:  {"id": str, "text": str}
//   response: {"id": str, "dim": int, "vectors": [[float, ...], ...],
//              "offsets": [[start, end], ...]}
//
// Offsets are code point intervals into the request text. Requests go
// either as an HTTP POST body or as one line on a child process's stdin,
// with the response read back as one line from its stdout.

#ifndef ORTHOPROBE_PROVIDERS_H_
#define ORTHOPROBE_PROVIDERS_H_

#include <atomic>
#include <chrono>
#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "orthoprobe/embed.h"

namespace orthoprobe {

struct ProviderRequest {
  std::string id;
  std::string text;
};

nlohmann::json ToJson(const ProviderRequest& request);

// Validates a decoded response against its request and converts it.
// Throws ProtocolError naming the offending field.
HiddenStateMatrix ParseProviderResponse(const nlohmann::json& response,
                                        const ProviderRequest& request);

// Serializes a matrix as a response to `request` (used by test stubs and
// the `serve-reference` command).
nlohmann::json MakeProviderResponse(const ProviderRequest& request,
                                    const HiddenStateMatrix& hidden);

// Transport errors are retried `attempts` times in total, sleeping
// initial_backoff, 2 * initial_backoff, ... between attempts.
struct RetryPolicy {
  int attempts = 3;
  std::chrono::milliseconds initial_backoff{200};
};

struct RemoteOptions {
  RetryPolicy retry;
  std::chrono::milliseconds timeout{60000};
  size_t max_in_flight = 1;
};

// Child process fed newline-delimited JSON. One request in flight.
class ExecProvider : public EmbeddingProvider {
 public:
  ExecProvider(std::string command, RemoteOptions options = {});
  ~ExecProvider() override;
  ExecProvider(const ExecProvider&) = delete;
  ExecProvider& operator=(const ExecProvider&) = delete;

  HiddenStateMatrix Embed(std::string_view text) override;
  size_t max_in_flight() const override { return 1; }
  std::string tag() const override { return "exec:" + command_; }

 private:
  void Start();
  void Stop();
  std::string RoundTrip(const std::string& line);

  std::string command_;
  RemoteOptions options_;
  std::mutex mu_;
  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string pending_;  // bytes read past the last newline
  uint64_t next_id_ = 0;
};

// HTTP POST of the request JSON to `url` (http://host[:port]/path).
class HttpProvider : public EmbeddingProvider {
 public:
  HttpProvider(std::string url, RemoteOptions options = {});

  HiddenStateMatrix Embed(std::string_view text) override;
  size_t max_in_flight() const override { return options_.max_in_flight; }
  std::string tag() const override { return "http:" + url_; }

 private:
  std::string url_;
  std::string host_;  // scheme://host:port
  std::string path_;
  RemoteOptions options_;
  std::atomic<uint64_t> next_id_{0};
};

struct ProviderSettings {
  std::string selection = "reference";  // reference | exec:<cmd> | http:<url>
  std::shared_ptr<const Tokenizer> tokenizer;  // required for "reference"
  double alpha = 0.3;
  uint64_t seed = 0;
  size_t reference_dimension = kReferenceDimension;
  RemoteOptions remote;
};

// Throws ConfigError for an unknown selection string.
std::shared_ptr<EmbeddingProvider> MakeProvider(const ProviderSettings& settings);

}  // namespace orthoprobe

#endif  // ORTHOPROBE_PROVIDERS_H_
