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

#include "orthoprobe/noiser.h"

#include <fmt/format.h>

#include "orthoprobe/corpus.h"
#include "orthoprobe/errors.h"
#include "orthoprobe/rng.h"

namespace orthoprobe {
namespace {

bool IsUpper(char c) { return c >= 'A' && c <= 'Z'; }
bool IsLower(char c) { return c >= 'a' && c <= 'z'; }

}  // namespace

uint64_t DeriveSeed(uint64_t global_seed, std::string_view word) {
  char le[8];
  for (int i = 0; i < 8; ++i) {
    le[i] = static_cast<char>((global_seed >> (8 * i)) & 0xFF);
  }
  uint64_t h = Fnv1a64(std::string_view(le, 8));
  h = Fnv1a64(word, h);
  return Mix64(h);
}

NoisePair NoiseWord(std::string_view word, uint64_t seed) {
  if (!IsVocabularyWord(word, 4)) {
    throw InputError(fmt::format(
        "cannot noise '{}': expected at least 4 ASCII letters", word));
  }
  SplitMix64 rng(seed);
  const size_t position = rng.UniformBelow(word.size());
  const char from = word[position];
  const char base = IsUpper(from) ? 'A' : 'a';
  const int from_index = from - base;
  int pick = static_cast<int>(rng.UniformBelow(25));
  if (pick >= from_index) ++pick;

  NoisePair pair;
  pair.original = std::string(word);
  pair.edited = pair.original;
  pair.edited[position] = static_cast<char>(base + pick);
  pair.position = position;
  pair.original_char = from;
  pair.replacement_char = pair.edited[position];
  pair.seed = seed;
  return pair;
}

void ValidateNoisePair(const NoisePair& p) {
  auto fail = [&](std::string_view why) {
    throw ConsistencyError(
        fmt::format("noise pair '{}' -> '{}': {}", p.original, p.edited, why));
  };
  if (p.original.size() != p.edited.size()) fail("length differs");
  if (p.position >= p.original.size()) fail("position out of range");
  for (size_t i = 0; i < p.original.size(); ++i) {
    if (i != p.position && p.original[i] != p.edited[i]) {
      fail("differs outside the edit position");
    }
  }
  if (p.original[p.position] != p.original_char ||
      p.edited[p.position] != p.replacement_char) {
    fail("recorded characters do not match the words");
  }
  if (p.original_char == p.replacement_char) fail("no-op substitution");
  const bool same_case =
      (IsUpper(p.original_char) && IsUpper(p.replacement_char)) ||
      (IsLower(p.original_char) && IsLower(p.replacement_char));
  if (!same_case) fail("characters are not same-case ASCII letters");
}

}  // namespace orthoprobe
