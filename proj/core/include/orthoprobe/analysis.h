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

// Token-length binned similarity statistics and token-length histograms.

#ifndef ORTHOPROBE_ANALYSIS_H_
#define ORTHOPROBE_ANALYSIS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace orthoprobe {

class Tokenizer;

enum class Measure { kCosine, kSpearman };
inline constexpr Measure kMeasures[] = {Measure::kCosine, Measure::kSpearman};

std::string_view ToString(Measure m);

struct SimilarityRecord {
  std::string word;
  std::string edited;
  size_t token_length = 1;  // tokens of the unedited word
  std::optional<double> cosine;
  std::optional<double> spearman;
  bool with_context = false;
  std::string model_tag;

  std::optional<double> value(Measure m) const {
    return m == Measure::kCosine ? cosine : spearman;
  }
  bool operator==(const SimilarityRecord&) const = default;
};

struct Interval {
  double mean = 0.0;
  double low = 0.0;
  double high = 0.0;
};

// z = 2.5758293 at level 0.99; other levels use the inverse normal CDF.
double CriticalValue(double level);

// Normal approximation mean +- z * s / sqrt(n), s with n - 1 in the
// denominator. One value gives the degenerate interval (v, v, v).
// Throws InputError on an empty list or a level outside (0, 1).
Interval MeanCi(std::span<const double> values, double level = 0.99);

// Collects per-bin values. Bins 1..max_bin hold their own length; longer
// words share bin max_bin + 1. Values are kept and sorted before summing,
// so results do not depend on insertion order or on how partial
// accumulators were merged.
class BinAccumulator {
 public:
  explicit BinAccumulator(size_t max_bin = 6);

  void Add(const SimilarityRecord& record);
  void Merge(const BinAccumulator& other);

  size_t max_bin() const { return max_bin_; }
  size_t BinOf(size_t token_length) const;

  struct Cell {
    std::vector<double> values;
    size_t undefined = 0;
  };
  // Key: (measure, with_context, bin).
  using Key = std::tuple<Measure, bool, size_t>;
  const std::map<Key, Cell>& cells() const { return cells_; }
  bool has_context_flag(bool flag) const { return flags_[flag ? 1 : 0]; }
  size_t records() const { return records_; }

 private:
  size_t max_bin_;
  std::map<Key, Cell> cells_;
  bool flags_[2] = {false, false};
  size_t records_ = 0;
};

struct BinStats {
  Measure measure = Measure::kCosine;
  bool with_context = false;
  size_t bin = 1;          // max_bin + 1 is the open-ended top bin
  bool top = false;
  size_t n = 0;            // defined values; 0 leaves `ci` empty
  std::optional<Interval> ci;
  size_t undefined_n = 0;

  std::string label() const;  // "3", or "7+" for the top bin
};

// One row per measure x context flag present x bin (1..max_bin, top),
// ordered by measure, then flag (false first), then bin. Empty input
// gives an empty list. Throws InputError when max_bin == 0.
std::vector<BinStats> BinRecords(std::span<const SimilarityRecord> records,
                                 size_t max_bin = 6, double level = 0.99);
std::vector<BinStats> Summarize(const BinAccumulator& acc, double level = 0.99);

struct LengthHistogram {
  std::map<size_t, size_t> counts;
  size_t total = 0;
  bool noised = false;

  void Add(size_t length, size_t count = 1);
  double Mean() const;
  double Median() const;  // midpoint of the two middle values for even totals
  double ShareAtLeast(size_t length) const;
  bool operator==(const LengthHistogram&) const = default;
};

// Token lengths of `words`. Throws InputError when `words` is empty.
LengthHistogram LengthDistribution(std::span<const std::string> words,
                                   const Tokenizer& tokenizer,
                                   bool word_initial, bool noised = false);

struct DistributionSummary {
  double mean = 0.0;
  double median = 0.0;
  double share_ge3 = 0.0;
  size_t total = 0;
};

struct DistributionComparison {
  DistributionSummary original;
  DistributionSummary noised;
  double delta_mean = 0.0;
  double delta_median = 0.0;
  double delta_share_ge3 = 0.0;
};

// Throws ConsistencyError when the totals differ.
DistributionComparison CompareDistributions(const LengthHistogram& original,
                                            const LengthHistogram& noised);

}  // namespace orthoprobe

#endif  // ORTHOPROBE_ANALYSIS_H_
