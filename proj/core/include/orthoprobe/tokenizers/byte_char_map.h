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

#ifndef ORTHOPROBE_TOKENIZERS_BYTE_CHAR_MAP_H_
#define ORTHOPROBE_TOKENIZERS_BYTE_CHAR_MAP_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>

namespace orthoprobe {

// The reversible byte -> printable code point table that byte-level BPE
// vocabularies are written in. Printable Latin-1 bytes ([33,126],
// [161,172], [174,255]) map to themselves; the remaining 68 bytes map in
// ascending order to U+0100, U+0101, ...
class ByteCharMap {
 public:
  static const ByteCharMap& Get();

  char32_t Forward(uint8_t byte) const { return forward_[byte]; }
  std::optional<uint8_t> Inverse(char32_t cp) const;

  // UTF-8 encoded mapped form of raw bytes.
  std::string Map(std::string_view bytes) const;
  // Inverse of Map(); nullopt if any code point is outside the table.
  std::optional<std::string> Unmap(std::string_view mapped) const;

 private:
  ByteCharMap();

  std::array<char32_t, 256> forward_{};
  std::unordered_map<char32_t, uint8_t> inverse_;
};

}  // namespace orthoprobe

#endif  // ORTHOPROBE_TOKENIZERS_BYTE_CHAR_MAP_H_
