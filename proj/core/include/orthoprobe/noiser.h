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

#ifndef ORTHOPROBE_NOISER_H_
#define ORTHOPROBE_NOISER_H_

#include <cstdint>
#include <string>
#include <string_view>

namespace orthoprobe {

// A word and its single-letter substitution. `original` and `edited`
// differ only at `position`; the two letters share case.
struct NoisePair {
  std::string original;
  std::string edited;
  size_t position = 0;
  char original_char = 0;
  char replacement_char = 0;
  uint64_t seed = 0;

  bool operator==(const NoisePair&) const = default;
};

// Per-word seed: Mix64(FNV-1a(le64(global_seed) || word bytes)).
// Independent of processing order.
uint64_t DeriveSeed(uint64_t global_seed, std::string_view word);

// Draws position uniformly from [0, size) and then the replacement
// uniformly from the 25 same-case letters other than the original, both
// from SplitMix64(seed) in that order. Throws InputError unless `word`
// is >= 4 ASCII letters.
NoisePair NoiseWord(std::string_view word, uint64_t seed);

// Checks every NoisePair invariant; throws ConsistencyError naming the
// first one violated.
void ValidateNoisePair(const NoisePair& pair);

}  // namespace orthoprobe

#endif  // ORTHOPROBE_NOISER_H_
