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

#include "orthoprobe/report.h"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>

namespace orthoprobe {
namespace {

constexpr double kWidth = 640, kHeight = 400;
constexpr double kLeft = 60, kRight = 20, kTop = 40, kBottom = 50;

std::string Num(double v) { return fmt::format("{}", v); }

std::string Px(double v) { return fmt::format("{:.2f}", v); }

std::string SvgOpen(const Metadata& meta, std::string_view title) {
  return fmt::format(
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<!-- {} -->\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" "
      "viewBox=\"0 0 {} {}\" font-family=\"sans-serif\" font-size=\"12\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      "<text x=\"{}\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
      meta.CommentLine().substr(2), kWidth, kHeight, kWidth, kHeight,
      kWidth / 2, title);
}

struct Frame {
  double x0, x1, y0, y1;  // data ranges
  double X(double x) const {
    return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight);
  }
  double Y(double y) const {
    return kHeight - kBottom - (y - y0) / (y1 - y0) * (kHeight - kTop - kBottom);
  }
};

std::string Axes(const Frame& f, std::string_view x_label, std::string_view y_label,
                 int y_ticks) {
  std::string s = fmt::format(
      "<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"black\"/>\n"
      "<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{3}\" stroke=\"black\"/>\n",
      Px(kLeft), Px(kHeight - kBottom), Px(kWidth - kRight), Px(kTop));
  for (int i = 0; i <= y_ticks; ++i) {
    const double v = f.y0 + (f.y1 - f.y0) * i / y_ticks;
    s += fmt::format(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{:.2f}</text>\n",
        Px(kLeft - 6), Px(f.Y(v) + 4), v);
  }
  s += fmt::format(
      "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n"
      "<text x=\"14\" y=\"{}\" text-anchor=\"middle\" "
      "transform=\"rotate(-90 14 {})\">{}</text>\n",
      Px(kWidth / 2), Px(kHeight - 10), x_label, Px(kHeight / 2),
      Px(kHeight / 2), y_label);
  return s;
}

}  // namespace

std::string ReportCsv(std::span<const BinStats> bins, const Metadata& meta) {
  std::string out = meta.CommentLine() + "\n" + kReportHeader + "\n";
  for (const auto& b : bins) {
    out += fmt::format("{},{},{},{},", ToString(b.measure),
                       b.with_context ? "true" : "false", b.label(), b.n);
    if (b.ci) {
      out += fmt::format("{},{},{}", Num(b.ci->mean), Num(b.ci->low), Num(b.ci->high));
    } else {
      out += ",,";
    }
    out += fmt::format(",{}\n", b.undefined_n);
  }
  return out;
}

std::string HistogramCsv(const LengthHistogram& original,
                         const LengthHistogram& noised, const Metadata& meta) {
  std::string out = meta.CommentLine() + "\n" + kHistogramHeader + "\n";
  for (const LengthHistogram* h : {&original, &noised}) {
    for (const auto& [len, n] : h->counts) {
      out += fmt::format("{},{},{}\n", len, n, h->noised ? "true" : "false");
    }
  }
  return out;
}

std::string ComparisonCsv(const DistributionComparison& c, const Metadata& meta) {
  std::string out = meta.CommentLine() + "\nstatistic,original,noised,delta\n";
  out += fmt::format("total,{},{},0\n", c.original.total, c.noised.total);
  out += fmt::format("mean,{},{},{}\n", Num(c.original.mean), Num(c.noised.mean),
                     Num(c.delta_mean));
  out += fmt::format("median,{},{},{}\n", Num(c.original.median),
                     Num(c.noised.median), Num(c.delta_median));
  out += fmt::format("share_ge3,{},{},{}\n", Num(c.original.share_ge3),
                     Num(c.noised.share_ge3), Num(c.delta_share_ge3));
  return out;
}

std::string ReportSvg(std::span<const BinStats> bins, Measure measure,
                      const Metadata& meta) {
  std::vector<const BinStats*> rows;
  size_t last_bin = 1;
  double lo = 1.0, hi = 0.0;
  for (const auto& b : bins) {
    if (b.measure != measure) continue;
    rows.push_back(&b);
    last_bin = std::max(last_bin, b.bin);
    if (b.ci) {
      lo = std::min(lo, b.ci->low);
      hi = std::max(hi, b.ci->high);
    }
  }
  if (lo > hi) lo = 0.0, hi = 1.0;
  const double pad = std::max(0.05 * (hi - lo), 1e-3);
  Frame f{0.5, static_cast<double>(last_bin) + 0.5, lo - pad, hi + pad};

  std::string s = SvgOpen(meta, fmt::format("{} similarity by token length",
                                            ToString(measure)));
  s += Axes(f, "token length of the original word", ToString(measure), 5);
  for (const BinStats* b : rows) {
    if (b->with_context) continue;
    s += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
                     Px(f.X(static_cast<double>(b->bin))),
                     Px(kHeight - kBottom + 16), b->label());
  }
  static constexpr const char* kColors[] = {"#1f77b4", "#d62728"};
  for (bool flag : {false, true}) {
    std::vector<const BinStats*> series;
    for (const BinStats* b : rows) {
      if (b->with_context == flag && b->ci) series.push_back(b);
    }
    if (series.empty()) continue;
    const char* color = kColors[flag ? 1 : 0];
    std::string band, line;
    for (const BinStats* b : series) {
      band += fmt::format("{},{} ", Px(f.X(b->bin)), Px(f.Y(b->ci->high)));
    }
    for (auto it = series.rbegin(); it != series.rend(); ++it) {
      band += fmt::format("{},{} ", Px(f.X((*it)->bin)), Px(f.Y((*it)->ci->low)));
    }
    for (const BinStats* b : series) {
      line += fmt::format("{},{} ", Px(f.X(b->bin)), Px(f.Y(b->ci->mean)));
    }
    band.pop_back();
    line.pop_back();
    s += fmt::format("<polygon points=\"{}\" fill=\"{}\" fill-opacity=\"0.2\"/>\n",
                     band, color);
    s += fmt::format(
        "<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"2\"/>\n",
        line, color);
    s += fmt::format(
        "<text x=\"{}\" y=\"{}\" fill=\"{}\">{}</text>\n", Px(kWidth - 150),
        Px(kTop + 14 + (flag ? 16 : 0)), color,
        flag ? "with context" : "without context");
  }
  s += "</svg>\n";
  return s;
}

std::string HistogramSvg(const LengthHistogram& original,
                         const LengthHistogram& noised, const Metadata& meta) {
  std::set<size_t> lengths;
  for (const auto& [len, n] : original.counts) lengths.insert(len);
  for (const auto& [len, n] : noised.counts) lengths.insert(len);
  double top = 0.0;
  auto frac = [](const LengthHistogram& h, size_t len) {
    auto it = h.counts.find(len);
    return it == h.counts.end() || h.total == 0
               ? 0.0
               : static_cast<double>(it->second) / static_cast<double>(h.total);
  };
  for (size_t len : lengths) {
    top = std::max({top, frac(original, len), frac(noised, len)});
  }
  if (top == 0.0) top = 1.0;
  const double slots = static_cast<double>(std::max<size_t>(lengths.size(), 1));
  Frame f{0.0, slots, 0.0, top * 1.05};

  std::string s = SvgOpen(meta, "distribution of token lengths");
  s += Axes(f, "token length", "fraction of words", 4);
  const double slot_px = (kWidth - kLeft - kRight) / slots;
  const double bar = slot_px * 0.38;
  size_t k = 0;
  for (size_t len : lengths) {
    const double x = f.X(static_cast<double>(k));
    const double a = frac(original, len), b = frac(noised, len);
    s += fmt::format(
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"#1f77b4\"/>\n",
        Px(x + slot_px * 0.1), Px(f.Y(a)), Px(bar), Px(f.Y(0) - f.Y(a)));
    s += fmt::format(
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"#ff7f0e\"/>\n",
        Px(x + slot_px * 0.1 + bar), Px(f.Y(b)), Px(bar), Px(f.Y(0) - f.Y(b)));
    s += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
                     Px(x + slot_px / 2), Px(kHeight - kBottom + 16), len);
    ++k;
  }
  s += fmt::format("<text x=\"{}\" y=\"{}\" fill=\"#1f77b4\">original</text>\n"
                   "<text x=\"{}\" y=\"{}\" fill=\"#ff7f0e\">noised</text>\n",
                   Px(kWidth - 120), Px(kTop + 14), Px(kWidth - 120), Px(kTop + 30));
  s += "</svg>\n";
  return s;
}

}  // namespace orthoprobe
