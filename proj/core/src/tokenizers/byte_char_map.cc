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

#include "orthoprobe/tokenizers/byte_char_map.h"

#include "orthoprobe/utf8.h"

namespace orthoprobe {

const ByteCharMap& ByteCharMap::Get() {
  static const ByteCharMap map;
  return map;
}

ByteCharMap::ByteCharMap() {
  char32_t next = 256;
  for (int b = 0; b < 256; ++b) {
    const bool printable = (b >= 33 && b <= 126) || (b >= 161 && b <= 172) ||
                           (b >= 174 && b <= 255);
    forward_[b] = printable ? static_cast<char32_t>(b) : next++;
    inverse_.emplace(forward_[b], static_cast<uint8_t>(b));
  }
}

std::optional<uint8_t> ByteCharMap::Inverse(char32_t cp) const {
  auto it = inverse_.find(cp);
  if (it == inverse_.end()) return std::nullopt;
  return it->second;
}

std::string ByteCharMap::Map(std::string_view bytes) const {
  std::string out;
  out.reserve(bytes.size() * 2);
  for (char c : bytes) utf8::Append(out, forward_[static_cast<uint8_t>(c)]);
  return out;
}

std::optional<std::string> ByteCharMap::Unmap(std::string_view mapped) const {
  std::string out;
  size_t pos = 0;
  while (pos < mapped.size()) {
    auto b = Inverse(utf8::Next(mapped, pos));
    if (!b) return std::nullopt;
    out.push_back(static_cast<char>(*b));
  }
  return out;
}

}  // namespace orthoprobe
