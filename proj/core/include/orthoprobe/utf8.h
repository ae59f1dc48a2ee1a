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

// UTF-8 helpers and the handful of Unicode character classes the
// pre-tokenizers need. All "character offsets" in this project are
// code point indices, matching what Python-side model servers report.

#ifndef ORTHOPROBE_UTF8_H_
#define ORTHOPROBE_UTF8_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace orthoprobe::utf8 {

// Returns the byte offset of the first invalid sequence, or nullopt if
// `text` is well-formed UTF-8 (overlongs and surrogates are invalid).
std::optional<size_t> FindInvalid(std::string_view text);

// Throws DecodeError naming the byte offset when `text` is not UTF-8.
void Validate(std::string_view text, std::string_view what);

// Decodes one code point starting at `pos`, advancing `pos`. Input must be
// valid UTF-8.
char32_t Next(std::string_view text, size_t& pos);

std::u32string Decode(std::string_view text);
void Append(std::string& out, char32_t cp);
std::string Encode(std::u32string_view cps);

// Number of code points in valid UTF-8 text.
size_t Length(std::string_view text);

// Byte offset of each code point plus a trailing entry equal to
// text.size(), so that char index i spans [table[i], table[i + 1]).
std::vector<size_t> CharToByteTable(std::string_view text);

// Unicode general-category tests.
bool IsLetter(char32_t cp);
bool IsNumber(char32_t cp);
bool IsPunctuation(char32_t cp);
bool IsControl(char32_t cp);
// Python str.isspace() semantics.
bool IsWhitespace(char32_t cp);

}  // namespace orthoprobe::utf8

#endif  // ORTHOPROBE_UTF8_H_
