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

// CSV and SVG renderings of analysis results. Numbers are printed in
// shortest round-trip form so equal inputs give byte-equal files.

#ifndef ORTHOPROBE_REPORT_H_
#define ORTHOPROBE_REPORT_H_

#include <span>
#include <string>

#include "orthoprobe/analysis.h"
#include "orthoprobe/records.h"

namespace orthoprobe {

inline constexpr char kReportHeader[] =
    "measure,with_context,bin,n,mean,ci_low,ci_high,undefined_n";
inline constexpr char kHistogramHeader[] = "length,count,noised";

// Metadata comment line, header, then one row per BinStats. Empty bins
// leave mean and the bounds blank.
std::string ReportCsv(std::span<const BinStats> bins, const Metadata& meta);

// Original rows first, then noised, each by ascending length.
std::string HistogramCsv(const LengthHistogram& original,
                         const LengthHistogram& noised, const Metadata& meta);

// statistic,original,noised,delta
std::string ComparisonCsv(const DistributionComparison& c, const Metadata& meta);

// Line chart of bin means with the CI as a band, one series per context
// flag present.
std::string ReportSvg(std::span<const BinStats> bins, Measure measure,
                      const Metadata& meta);

// Grouped bars of the two histograms as fractions of their totals.
std::string HistogramSvg(const LengthHistogram& original,
                         const LengthHistogram& noised, const Metadata& meta);

}  // namespace orthoprobe

#endif  // ORTHOPROBE_REPORT_H_
