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

#ifndef ORTHOPROBE_ERRORS_H_
#define ORTHOPROBE_ERRORS_H_

#include <stdexcept>
#include <string>

namespace orthoprobe {

// Process exit codes used by the command-line tool.
enum class ExitCode : int {
  kOk = 0,
  kUsage = 1,      // usage or configuration error
  kData = 2,       // data or file-format error
  kProvider = 3,   // embedding provider or transport error
};

// Base for every error raised by the library. Each subclass knows which
// exit code the CLI should report for it.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual ExitCode exit_code() const { return ExitCode::kData; }
};

#define ORTHOPROBE_DEFINE_ERROR(Name, Code)                      \
  class Name : public Error {                                    \
   public:                                                       \
    using Error::Error;                                          \
    ExitCode exit_code() const override { return ExitCode::Code; } \
  }

ORTHOPROBE_DEFINE_ERROR(IoError, kData);
ORTHOPROBE_DEFINE_ERROR(DecodeError, kData);
ORTHOPROBE_DEFINE_ERROR(FormatError, kData);
ORTHOPROBE_DEFINE_ERROR(InputError, kData);
ORTHOPROBE_DEFINE_ERROR(LookupError, kData);
ORTHOPROBE_DEFINE_ERROR(ConsistencyError, kData);
ORTHOPROBE_DEFINE_ERROR(CoverageError, kData);
ORTHOPROBE_DEFINE_ERROR(ConfigError, kUsage);
ORTHOPROBE_DEFINE_ERROR(ProtocolError, kProvider);
ORTHOPROBE_DEFINE_ERROR(TransportError, kProvider);

// Raised by a similarity measure whose value is mathematically undefined
// (zero-norm vector, constant ranks). Callers tally these instead of
// recording a number.
ORTHOPROBE_DEFINE_ERROR(UndefinedSimilarityError, kData);

#undef ORTHOPROBE_DEFINE_ERROR

}  // namespace orthoprobe

#endif  // ORTHOPROBE_ERRORS_H_
