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

#include "orthoprobe/providers.h"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cmath>
#include <cstring>
#include <thread>

#include <fmt/format.h>
#include <httplib.h>

#include "orthoprobe/errors.h"
#include "orthoprobe/utf8.h"

namespace orthoprobe {
namespace {

using nlohmann::json;

[[noreturn]] void Bad(std::string_view field, std::string_view why) {
  throw ProtocolError(fmt::format("provider response field '{}': {}", field, why));
}

template <typename Fn>
auto WithRetry(const RetryPolicy& policy, Fn&& fn) {
  auto backoff = policy.initial_backoff;
  for (int attempt = 1;; ++attempt) {
    try {
      return fn();
    } catch (const TransportError& e) {
      if (attempt >= policy.attempts) {
        throw TransportError(fmt::format("{} (after {} attempts)", e.what(),
                                         attempt));
      }
    }
    std::this_thread::sleep_for(backoff);
    backoff *= 2;
  }
}

json ParseLine(std::string_view body) {
  try {
    return json::parse(body);
  } catch (const json::exception& e) {
    throw ProtocolError(fmt::format("provider sent invalid JSON: {}", e.what()));
  }
}

}  // namespace

json ToJson(const ProviderRequest& request) {
  return json{{"id", request.id}, {"text", request.text}};
}

HiddenStateMatrix ParseProviderResponse(const json& r,
                                        const ProviderRequest& request) {
  if (!r.is_object()) Bad("<root>", "expected a JSON object");
  if (!r.contains("id") || !r["id"].is_string()) Bad("id", "missing or not a string");
  if (r["id"].get<std::string>() != request.id) {
    Bad("id", fmt::format("'{}' does not echo request id '{}'",
                          r["id"].get<std::string>(), request.id));
  }
  if (!r.contains("dim") || !r["dim"].is_number_integer() ||
      r["dim"].get<int64_t>() <= 0) {
    Bad("dim", "missing or not a positive integer");
  }
  const auto dim = static_cast<size_t>(r["dim"].get<int64_t>());
  if (!r.contains("vectors") || !r["vectors"].is_array()) {
    Bad("vectors", "missing or not an array");
  }
  if (!r.contains("offsets") || !r["offsets"].is_array()) {
    Bad("offsets", "missing or not an array");
  }
  const json& vectors = r["vectors"];
  const json& offsets = r["offsets"];
  if (vectors.size() != offsets.size()) {
    Bad("offsets", fmt::format("{} offsets for {} vectors", offsets.size(),
                               vectors.size()));
  }
  const size_t text_len = utf8::Length(request.text);
  HiddenStateMatrix hidden(dim);
  std::vector<double> row(dim);
  for (size_t i = 0; i < vectors.size(); ++i) {
    const json& v = vectors[i];
    if (!v.is_array() || v.size() != dim) {
      Bad(fmt::format("vectors[{}]", i), fmt::format("expected {} numbers", dim));
    }
    for (size_t k = 0; k < dim; ++k) {
      if (!v[k].is_number()) Bad(fmt::format("vectors[{}][{}]", i, k), "not a number");
      row[k] = v[k].get<double>();
      if (!std::isfinite(row[k])) {
        Bad(fmt::format("vectors[{}][{}]", i, k), "not finite");
      }
    }
    const json& o = offsets[i];
    if (!o.is_array() || o.size() != 2 || !o[0].is_number_integer() ||
        !o[1].is_number_integer()) {
      Bad(fmt::format("offsets[{}]", i), "expected [start, end] integers");
    }
    const auto s = o[0].get<int64_t>();
    const auto e = o[1].get<int64_t>();
    if (s < 0 || e < s || static_cast<size_t>(e) > text_len) {
      Bad(fmt::format("offsets[{}]", i),
          fmt::format("[{}, {}) outside text of length {}", s, e, text_len));
    }
    hidden.Append(row, {static_cast<size_t>(s), static_cast<size_t>(e)});
  }
  return hidden;
}

json MakeProviderResponse(const ProviderRequest& request,
                          const HiddenStateMatrix& hidden) {
  json vectors = json::array();
  json offsets = json::array();
  for (size_t i = 0; i < hidden.rows(); ++i) {
    const auto row = hidden.row(i);
    vectors.push_back(std::vector<double>(row.begin(), row.end()));
    offsets.push_back({hidden.offsets()[i].start, hidden.offsets()[i].end});
  }
  return json{{"id", request.id},
              {"dim", hidden.dimension()},
              {"vectors", std::move(vectors)},
              {"offsets", std::move(offsets)}};
}

// ---------------------------------------------------------------------------
// ExecProvider

ExecProvider::ExecProvider(std::string command, RemoteOptions options)
    : command_(std::move(command)), options_(options) {
  if (command_.empty()) throw ConfigError("exec provider needs a command");
}

ExecProvider::~ExecProvider() { Stop(); }

void ExecProvider::Start() {
  signal(SIGPIPE, SIG_IGN);
  int in_pipe[2], out_pipe[2];
  if (pipe(in_pipe) != 0) throw TransportError("pipe() failed");
  if (pipe(out_pipe) != 0) {
    close(in_pipe[0]);
    close(in_pipe[1]);
    throw TransportError("pipe() failed");
  }
  const pid_t pid = fork();
  if (pid < 0) throw TransportError("fork() failed");
  if (pid == 0) {
    setpgid(0, 0);  // so Stop() reaches grandchildren of the shell too
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    close(in_pipe[0]);
    close(in_pipe[1]);
    close(out_pipe[0]);
    close(out_pipe[1]);
    execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  setpgid(pid, pid);
  close(in_pipe[0]);
  close(out_pipe[1]);
  pid_ = pid;
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
  fcntl(to_child_, F_SETFD, FD_CLOEXEC);
  fcntl(from_child_, F_SETFD, FD_CLOEXEC);
  pending_.clear();
}

void ExecProvider::Stop() {
  if (to_child_ >= 0) close(to_child_);
  if (from_child_ >= 0) close(from_child_);
  to_child_ = from_child_ = -1;
  if (pid_ > 0) {
    int status = 0;
    if (waitpid(pid_, &status, WNOHANG) == 0) {
      kill(-pid_, SIGTERM);
      waitpid(pid_, &status, 0);
    } else {
      kill(-pid_, SIGTERM);  // leftovers after the shell itself exited
    }
  }
  pid_ = -1;
}

std::string ExecProvider::RoundTrip(const std::string& line) {
  if (pid_ < 0) Start();
  size_t written = 0;
  while (written < line.size()) {
    const ssize_t n = write(to_child_, line.data() + written, line.size() - written);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) {
      Stop();
      throw TransportError(fmt::format("provider '{}' closed its input", command_));
    }
    written += static_cast<size_t>(n);
  }
  const auto deadline = std::chrono::steady_clock::now() + options_.timeout;
  char buf[65536];
  for (;;) {
    if (auto nl = pending_.find('\n'); nl != std::string::npos) {
      std::string out = pending_.substr(0, nl);
      pending_.erase(0, nl + 1);
      return out;
    }
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) {
      Stop();
      throw TransportError(fmt::format("provider '{}' timed out", command_));
    }
    pollfd pfd{from_child_, POLLIN, 0};
    const int ready = poll(&pfd, 1, static_cast<int>(left.count()));
    if (ready < 0 && errno == EINTR) continue;
    if (ready <= 0) continue;
    const ssize_t n = read(from_child_, buf, sizeof(buf));
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) {
      Stop();
      throw TransportError(fmt::format("provider '{}' exited", command_));
    }
    pending_.append(buf, static_cast<size_t>(n));
  }
}

HiddenStateMatrix ExecProvider::Embed(std::string_view text) {
  std::lock_guard lock(mu_);
  const ProviderRequest request{fmt::format("{}", next_id_++), std::string(text)};
  const std::string line = ToJson(request).dump() + "\n";
  const std::string reply =
      WithRetry(options_.retry, [&] { return RoundTrip(line); });
  return ParseProviderResponse(ParseLine(reply), request);
}

// ---------------------------------------------------------------------------
// HttpProvider

HttpProvider::HttpProvider(std::string url, RemoteOptions options)
    : url_(std::move(url)), options_(options) {
  std::string rest = url_;
  std::string scheme = "http://";
  if (rest.starts_with("http://")) {
    rest.erase(0, 7);
  } else if (rest.starts_with("https://")) {
    throw ConfigError("https provider URLs are not supported; use http://");
  }
  const auto slash = rest.find('/');
  host_ = scheme + rest.substr(0, slash);
  path_ = slash == std::string::npos ? "/" : rest.substr(slash);
  if (host_.size() == scheme.size()) {
    throw ConfigError(fmt::format("provider URL '{}' has no host", url_));
  }
  if (options_.max_in_flight == 0) options_.max_in_flight = 1;
}

HiddenStateMatrix HttpProvider::Embed(std::string_view text) {
  const ProviderRequest request{fmt::format("{}", next_id_++), std::string(text)};
  const std::string body = ToJson(request).dump();
  const std::string reply = WithRetry(options_.retry, [&] {
    httplib::Client client(host_);
    client.set_connection_timeout(options_.timeout);
    client.set_read_timeout(options_.timeout);
    client.set_write_timeout(options_.timeout);
    auto res = client.Post(path_, body, "application/json");
    if (!res) {
      throw TransportError(fmt::format("POST {}{} failed: {}", host_, path_,
                                       httplib::to_string(res.error())));
    }
    if (res->status >= 500) {
      throw TransportError(fmt::format("POST {}{}: HTTP {}", host_, path_, res->status));
    }
    if (res->status != 200) {
      throw ProtocolError(fmt::format("POST {}{}: HTTP {}", host_, path_, res->status));
    }
    return res->body;
  });
  return ParseProviderResponse(ParseLine(reply), request);
}

std::shared_ptr<EmbeddingProvider> MakeProvider(const ProviderSettings& s) {
  if (s.selection == "reference") {
    if (!s.tokenizer) {
      throw ConfigError("the reference provider needs a tokenizer");
    }
    return std::make_shared<ReferenceProvider>(s.tokenizer, s.alpha, s.seed,
                                               s.reference_dimension);
  }
  if (s.selection.starts_with("exec:")) {
    return std::make_shared<ExecProvider>(s.selection.substr(5), s.remote);
  }
  if (s.selection.starts_with("http:")) {
    std::string url = s.selection.substr(5);
    if (!url.starts_with("http://") && !url.starts_with("https://")) {
      url = "http://" + url;
    }
    return std::make_shared<HttpProvider>(url, s.remote);
  }
  throw ConfigError(fmt::format(
      "unknown provider '{}' (expected reference, exec:<command> or http:<url>)",
      s.selection));
}

}  // namespace orthoprobe
