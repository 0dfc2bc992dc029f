// Copyright 2026 The qbench Authors
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

// Deterministic SVG 1.1 scatter plots of sweep CSV columns.

#pragma once

#include "qbench/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

namespace qbench {

struct PlotSpec {
  std::string x;
  std::string y;
  std::string series = "state_id";
  bool log_x = false;
};

class PlotError : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

inline constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                           "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

}  // namespace detail

/// Renders `table` as a scatter plot. Rows with an empty x or y are skipped.
inline std::string render_svg(const CsvTable& table, const PlotSpec& spec) {
  const auto xi = table.column(spec.x);
  const auto yi = table.column(spec.y);
  if (!xi) throw PlotError("CSV has no column '" + spec.x + "'");
  if (!yi) throw PlotError("CSV has no column '" + spec.y + "'");
  const auto si = table.column(spec.series);

  std::map<std::string, std::vector<std::pair<double, double>>> series;
  for (const auto& row : table.rows) {
    const auto& xs = row[*xi];
    const auto& ys = row[*yi];
    if (xs.empty() || ys.empty()) continue;
    double x = std::stod(xs), y = std::stod(ys);
    if (spec.log_x) {
      if (x <= 0.0) continue;
      x = std::log10(x);
    }
    series[si ? row[*si] : std::string("0")].emplace_back(x, y);
  }

  double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
  bool any = false;
  for (const auto& [_, pts] : series) {
    for (const auto& [x, y] : pts) {
      if (!any) {
        x0 = x1 = x;
        y0 = y1 = y;
        any = true;
      }
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  }
  if (x1 - x0 < 1e-12) {
    x0 -= 0.5;
    x1 += 0.5;
  }
  if (y1 - y0 < 1e-12) {
    y0 -= 0.5;
    y1 += 0.5;
  }

  constexpr double W = 640, H = 480, L = 80, R = 20, T = 20, B = 60;
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };

  using detail::fmt;
  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"640\" height=\"480\" "
       "viewBox=\"0 0 640 480\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"640\" height=\"480\" fill=\"white\"/>\n";
  s += "<g stroke=\"black\" stroke-width=\"1\">\n";
  s += "<line x1=\"" + fmt("%.2f", L) + "\" y1=\"" + fmt("%.2f", H - B) + "\" x2=\"" + fmt("%.2f", W - R) +
       "\" y2=\"" + fmt("%.2f", H - B) + "\"/>\n";
  s += "<line x1=\"" + fmt("%.2f", L) + "\" y1=\"" + fmt("%.2f", T) + "\" x2=\"" + fmt("%.2f", L) + "\" y2=\"" +
       fmt("%.2f", H - B) + "\"/>\n";
  constexpr int kTicks = 5;
  for (int k = 0; k <= kTicks; ++k) {
    const double tx = x0 + (x1 - x0) * k / kTicks;
    const double ty = y0 + (y1 - y0) * k / kTicks;
    s += "<line x1=\"" + fmt("%.2f", px(tx)) + "\" y1=\"" + fmt("%.2f", H - B) + "\" x2=\"" + fmt("%.2f", px(tx)) +
         "\" y2=\"" + fmt("%.2f", H - B + 5) + "\"/>\n";
    s += "<line x1=\"" + fmt("%.2f", L - 5) + "\" y1=\"" + fmt("%.2f", py(ty)) + "\" x2=\"" + fmt("%.2f", L) +
         "\" y2=\"" + fmt("%.2f", py(ty)) + "\"/>\n";
  }
  s += "</g>\n<g font-family=\"sans-serif\" font-size=\"11\" fill=\"black\">\n";
  for (int k = 0; k <= kTicks; ++k) {
    const double tx = x0 + (x1 - x0) * k / kTicks;
    const double ty = y0 + (y1 - y0) * k / kTicks;
    s += "<text x=\"" + fmt("%.2f", px(tx)) + "\" y=\"" + fmt("%.2f", H - B + 18) + "\" text-anchor=\"middle\">" +
         fmt("%.4g", tx) + "</text>\n";
    s += "<text x=\"" + fmt("%.2f", L - 8) + "\" y=\"" + fmt("%.2f", py(ty) + 4) + "\" text-anchor=\"end\">" +
         fmt("%.4g", ty) + "</text>\n";
  }
  const std::string xlabel = spec.log_x ? "log10(" + spec.x + ")" : spec.x;
  s += "<text x=\"" + fmt("%.2f", (L + W - R) / 2) + "\" y=\"" + fmt("%.2f", H - 15) +
       "\" text-anchor=\"middle\" font-size=\"14\">" + detail::xml_escape(xlabel) + "</text>\n";
  s += "<text x=\"20\" y=\"" + fmt("%.2f", (T + H - B) / 2) + "\" text-anchor=\"middle\" font-size=\"14\" " +
       "transform=\"rotate(-90 20 " + fmt("%.2f", (T + H - B) / 2) + ")\">" + detail::xml_escape(spec.y) +
       "</text>\n</g>\n";

  std::size_t idx = 0;
  for (const auto& [name, pts] : series) {
    const char* color = detail::kPalette[idx++ % std::size(detail::kPalette)];
    s += "<g fill=\"" + std::string(color) + "\" data-series=\"" + detail::xml_escape(name) + "\">\n";
    for (const auto& [x, y] : pts) {
      s += "<circle cx=\"" + fmt("%.2f", px(x)) + "\" cy=\"" + fmt("%.2f", py(y)) + "\" r=\"2.5\"/>\n";
    }
    s += "</g>\n";
  }
  s += "</svg>\n";
  return s;
}

}  // namespace qbench
