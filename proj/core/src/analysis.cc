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

#include "orthoprobe/analysis.h"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "orthoprobe/errors.h"
#include "orthoprobe/tokenizers/tokenizer.h"

namespace orthoprobe {
namespace {

// Acklam's rational approximation, polished with one Halley step.
double InverseNormalCdf(double p) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double kLow = 0.02425;
  double x;
  if (p < kLow) {
    const double q = std::sqrt(-2 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  } else if (p <= 1 - kLow) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
  } else {
    const double q = std::sqrt(-2 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
  const double u = e * std::sqrt(2 * M_PI) * std::exp(x * x / 2);
  return x - u / (1 + x * u / 2);
}

}  // namespace

std::string_view ToString(Measure m) {
  return m == Measure::kCosine ? "cosine" : "spearman";
}

double CriticalValue(double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw InputError(fmt::format("confidence level {} outside (0, 1)", level));
  }
  if (std::abs(level - 0.99) < 1e-12) return 2.5758293;
  return InverseNormalCdf(0.5 + level / 2);
}

Interval MeanCi(std::span<const double> values, double level) {
  const double z = CriticalValue(level);
  if (values.empty()) throw InputError("confidence interval of no values");
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / n;
  if (values.size() == 1) return {mean, mean, mean};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double half = z * std::sqrt(ss / (n - 1)) / std::sqrt(n);
  return {mean, mean - half, mean + half};
}

BinAccumulator::BinAccumulator(size_t max_bin) : max_bin_(max_bin) {
  if (max_bin_ == 0) throw InputError("max_bin must be at least 1");
}

size_t BinAccumulator::BinOf(size_t token_length) const {
  return std::min(token_length, max_bin_ + 1);
}

void BinAccumulator::Add(const SimilarityRecord& r) {
  if (r.token_length == 0) {
    throw InputError(fmt::format("record for '{}' has token_length 0", r.word));
  }
  const size_t bin = BinOf(r.token_length);
  flags_[r.with_context ? 1 : 0] = true;
  for (Measure m : kMeasures) {
    Cell& cell = cells_[{m, r.with_context, bin}];
    if (auto v = r.value(m)) {
      cell.values.push_back(*v);
    } else {
      ++cell.undefined;
    }
  }
  ++records_;
}

void BinAccumulator::Merge(const BinAccumulator& other) {
  if (other.max_bin_ != max_bin_) {
    throw ConsistencyError("merging accumulators with different max_bin");
  }
  for (const auto& [key, cell] : other.cells_) {
    Cell& mine = cells_[key];
    mine.values.insert(mine.values.end(), cell.values.begin(), cell.values.end());
    mine.undefined += cell.undefined;
  }
  flags_[0] |= other.flags_[0];
  flags_[1] |= other.flags_[1];
  records_ += other.records_;
}

std::string BinStats::label() const {
  return top ? fmt::format("{}+", bin) : fmt::format("{}", bin);
}

std::vector<BinStats> Summarize(const BinAccumulator& acc, double level) {
  std::vector<BinStats> out;
  if (acc.records() == 0) return out;
  for (Measure m : kMeasures) {
    for (bool flag : {false, true}) {
      if (!acc.has_context_flag(flag)) continue;
      for (size_t bin = 1; bin <= acc.max_bin() + 1; ++bin) {
        BinStats s;
        s.measure = m;
        s.with_context = flag;
        s.bin = bin;
        s.top = bin == acc.max_bin() + 1;
        auto it = acc.cells().find({m, flag, bin});
        if (it != acc.cells().end()) {
          std::vector<double> values = it->second.values;
          std::sort(values.begin(), values.end());
          s.n = values.size();
          s.undefined_n = it->second.undefined;
          if (s.n > 0) s.ci = MeanCi(values, level);
        }
        out.push_back(s);
      }
    }
  }
  return out;
}

std::vector<BinStats> BinRecords(std::span<const SimilarityRecord> records,
                                 size_t max_bin, double level) {
  BinAccumulator acc(max_bin);
  for (const auto& r : records) acc.Add(r);
  return Summarize(acc, level);
}

void LengthHistogram::Add(size_t length, size_t count) {
  counts[length] += count;
  total += count;
}

double LengthHistogram::Mean() const {
  if (total == 0) return 0.0;
  double sum = 0.0;
  for (const auto& [len, n] : counts) sum += static_cast<double>(len) * n;
  return sum / static_cast<double>(total);
}

double LengthHistogram::Median() const {
  if (total == 0) return 0.0;
  // 0-based ranks of the middle element(s).
  const size_t lo_rank = (total - 1) / 2;
  const size_t hi_rank = total / 2;
  std::optional<size_t> lo, hi;
  size_t seen = 0;
  for (const auto& [len, n] : counts) {
    seen += n;
    if (!lo && lo_rank < seen) lo = len;
    if (!hi && hi_rank < seen) {
      hi = len;
      break;
    }
  }
  return (static_cast<double>(*lo) + static_cast<double>(*hi)) / 2;
}

double LengthHistogram::ShareAtLeast(size_t length) const {
  if (total == 0) return 0.0;
  size_t n = 0;
  for (auto it = counts.lower_bound(length); it != counts.end(); ++it) {
    n += it->second;
  }
  return static_cast<double>(n) / static_cast<double>(total);
}

LengthHistogram LengthDistribution(std::span<const std::string> words,
                                   const Tokenizer& tokenizer,
                                   bool word_initial, bool noised) {
  if (words.empty()) throw InputError("token-length distribution of no words");
  LengthHistogram h;
  h.noised = noised;
  for (const auto& w : words) h.Add(TokenLength(tokenizer, w, word_initial));
  return h;
}

DistributionComparison CompareDistributions(const LengthHistogram& original,
                                            const LengthHistogram& noised) {
  if (original.total != noised.total) {
    throw ConsistencyError(fmt::format(
        "histograms cover different word counts ({} vs {})", original.total,
        noised.total));
  }
  auto summarize = [](const LengthHistogram& h) {
    return DistributionSummary{h.Mean(), h.Median(), h.ShareAtLeast(3), h.total};
  };
  DistributionComparison c;
  c.original = summarize(original);
  c.noised = summarize(noised);
  c.delta_mean = c.noised.mean - c.original.mean;
  c.delta_median = c.noised.median - c.original.median;
  c.delta_share_ge3 = c.noised.share_ge3 - c.original.share_ge3;
  return c;
}

}  // namespace orthoprobe
