/*
 * Copyright 2026 The tenantsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "tenantsim/gantt.hpp"

#include <algorithm>
#include <cstdio>
#include <iterator>
#include <map>
#include <string>

namespace tenantsim {

namespace {

constexpr const char* kPalette[] = {"#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
                                    "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac"};

constexpr double kPlotWidth = 960.0;
constexpr double kPlotHeight = 480.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 40.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_gantt(const Trace& trace) {
  if (trace.layers.empty()) {
    throw Error(ErrorKind::EmptyTrace, "trace has no layers to draw");
  }
  const double span = static_cast<double>(std::max<Cycles>(trace.makespan, 1));
  const double cols = static_cast<double>(trace.array.cols);
  const double x_scale = kPlotWidth / span;
  const double y_scale = kPlotHeight / cols;

  std::map<std::string, std::size_t> colour;
  for (const auto& d : trace.dnns) colour.emplace(d.dnn_id, colour.size());

  std::string svg;
  const double width = kMarginLeft + kPlotWidth + 20.0;
  const double height = kMarginTop + kPlotHeight + kMarginBottom;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) +
         "\" height=\"" + num(height) + "\" viewBox=\"0 0 " + num(width) + " " +
         num(height) + "\">\n";
  svg += "<style>text{font-family:monospace;font-size:10px}</style>\n";
  svg += "<text x=\"" + num(kMarginLeft) + "\" y=\"20\">" +
         std::string(to_string(trace.mode)) + " schedule, " +
         std::to_string(trace.array.rows) + "x" + std::to_string(trace.array.cols) +
         " array, makespan " + std::to_string(trace.makespan) + " cycles</text>\n";
  svg += "<rect x=\"" + num(kMarginLeft) + "\" y=\"" + num(kMarginTop) + "\" width=\"" +
         num(kPlotWidth) + "\" height=\"" + num(kPlotHeight) +
         "\" fill=\"#f7f7f7\" stroke=\"#333\"/>\n";

  for (const auto& rec : trace.layers) {
    const double x = kMarginLeft + static_cast<double>(rec.start) * x_scale;
    const double w = static_cast<double>(rec.end - rec.start) * x_scale;
    const double y = kMarginTop + static_cast<double>(rec.col_start) * y_scale;
    const double h = static_cast<double>(rec.col_width) * y_scale;
    const auto it = colour.find(rec.layer.dnn_id);
    const std::size_t c = it == colour.end() ? 0 : it->second;
    const std::string label =
        escape(rec.layer.dnn_id) + "/" + std::to_string(rec.layer.layer_index);
    svg += "<g><title>" + label + " cols [" + std::to_string(rec.col_start) + "," +
           std::to_string(rec.col_start + rec.col_width) + ") cycles [" +
           std::to_string(rec.start) + "," + std::to_string(rec.end) + ")</title>";
    svg += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(w) +
           "\" height=\"" + num(h) + "\" fill=\"" + kPalette[c % std::size(kPalette)] +
           "\" stroke=\"#222\" stroke-width=\"0.5\"/>";
    svg += "<text x=\"" + num(x + 2.0) + "\" y=\"" + num(y + h / 2.0 + 3.0) + "\">" + label +
           "</text></g>\n";
  }

  // Column axis.
  for (std::int64_t c = 0; c <= trace.array.cols;
       c += std::max<std::int64_t>(1, trace.array.cols / 8)) {
    const double y = kMarginTop + static_cast<double>(c) * y_scale;
    svg += "<text x=\"4\" y=\"" + num(y + 3.0) + "\">col " + std::to_string(c) + "</text>\n";
  }
  svg += "<text x=\"" + num(kMarginLeft) + "\" y=\"" + num(height - 12.0) + "\">0</text>\n";
  svg += "<text x=\"" + num(kMarginLeft + kPlotWidth - 60.0) + "\" y=\"" +
         num(height - 12.0) + "\">" + std::to_string(trace.makespan) + "</text>\n";
  svg += "</svg>\n";
  return svg;
}

}  // namespace tenantsim
