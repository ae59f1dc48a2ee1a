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

#ifndef ORTHOPROBE_RNG_H_
#define ORTHOPROBE_RNG_H_

#include <cstdint>
#include <string_view>

namespace orthoprobe {

// 64-bit FNV-1a over raw bytes, continuing from `basis`.
uint64_t Fnv1a64(std::string_view bytes,
                 uint64_t basis = 0xcbf29ce484222325ULL);

// SplitMix64 output finalizer (Stafford variant 13).
uint64_t Mix64(uint64_t x);

// SplitMix64 generator. The algorithm is fixed and platform independent,
// unlike the std:: distributions, so seeded results replicate anywhere:
//
//   state += 0x9e3779b97f4a7c15;  return Mix64(state);
//
// UniformBelow uses rejection sampling on the top of the 64-bit range, so
// it is exactly uniform. UniformDouble returns the top 53 bits scaled to
// [0, 1).
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t Next();
  uint64_t UniformBelow(uint64_t bound);
  double UniformDouble();
  // Standard normal via Box-Muller (one draw per call, no caching).
  double Gaussian();

 private:
  uint64_t state_;
};

}  // namespace orthoprobe

#endif  // ORTHOPROBE_RNG_H_
