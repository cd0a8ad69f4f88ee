// Copyright 2026 The Metagame Authors
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

#include "metagame/svg.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace metagame {

namespace {

constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c",
                                   "#ff7f0e", "#9467bd", "#8c564b"};

std::string Escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string LineChart(const std::vector<Series>& series,
                      const ChartOptions& options) {
  const double margin = 50;
  const double w = options.width, h = options.height;
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0;
  double y0 = x0, y1 = -x0;
  auto tx = [&](double x) { return options.log_x ? std::log10(x) : x; };
  for (const Series& s : series) {
    for (auto [x, y] : s.points) {
      if (options.log_x && x <= 0) continue;
      x0 = std::min(x0, tx(x));
      x1 = std::max(x1, tx(x));
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  }
  if (!(x1 > x0)) { x0 -= 0.5; x1 += 0.5; }
  if (!(y1 > y0)) { y0 -= 0.5; y1 += 0.5; }
  auto px = [&](double x) {
    return margin + (tx(x) - x0) / (x1 - x0) * (w - 2 * margin);
  };
  auto py = [&](double y) {
    return h - margin - (y - y0) / (y1 - y0) * (h - 2 * margin);
  };
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
     << "\" height=\"" << h << "\" font-family=\"sans-serif\" "
     << "font-size=\"11\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << w / 2 << "\" y=\"20\" text-anchor=\"middle\" "
     << "font-size=\"14\">" << Escape(options.title) << "</text>\n";
  os << "<line x1=\"" << margin << "\" y1=\"" << h - margin << "\" x2=\""
     << w - margin << "\" y2=\"" << h - margin << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin
     << "\" y2=\"" << h - margin << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << w / 2 << "\" y=\"" << h - 10
     << "\" text-anchor=\"middle\">" << Escape(options.x_label) << "</text>\n";
  os << "<text x=\"15\" y=\"" << h / 2 << "\" transform=\"rotate(-90 15 "
     << h / 2 << ")\" text-anchor=\"middle\">" << Escape(options.y_label)
     << "</text>\n";
  os << "<text x=\"" << margin << "\" y=\"" << h - margin + 15
     << "\" text-anchor=\"middle\">"
     << (options.log_x ? std::pow(10.0, x0) : x0) << "</text>\n";
  os << "<text x=\"" << w - margin << "\" y=\"" << h - margin + 15
     << "\" text-anchor=\"middle\">"
     << (options.log_x ? std::pow(10.0, x1) : x1) << "</text>\n";
  os << "<text x=\"" << margin - 5 << "\" y=\"" << h - margin
     << "\" text-anchor=\"end\">" << y0 << "</text>\n";
  os << "<text x=\"" << margin - 5 << "\" y=\"" << margin + 4
     << "\" text-anchor=\"end\">" << y1 << "</text>\n";
  for (size_t k = 0; k < series.size(); ++k) {
    const char* color = kColors[k % (sizeof(kColors) / sizeof(kColors[0]))];
    os << "<polyline fill=\"none\" stroke=\"" << color
       << "\" stroke-width=\"1.2\" points=\"";
    for (auto [x, y] : series[k].points) {
      if (options.log_x && x <= 0) continue;
      os << px(x) << "," << py(y) << " ";
    }
    os << "\"/>\n";
    os << "<text x=\"" << margin + 8 << "\" y=\"" << margin + 14 * k
       << "\" fill=\"" << color << "\">" << Escape(series[k].name)
       << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace metagame
