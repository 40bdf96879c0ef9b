// Copyright 2026 The gbslab Authors
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

#include "gbs/svg.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "gbs/common.h"
#include "gbs/sectioned_text.h"

namespace gbs {

namespace {

constexpr double kWidth = 640;
constexpr double kHeight = 400;
constexpr double kLeft = 70;
constexpr double kRight = 160;
constexpr double kTop = 40;
constexpr double kBottom = 50;
constexpr const char *kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string escape(const std::string &text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

int column(const Table &t, const std::string &name) {
  auto it = std::find(t.header.begin(), t.header.end(), name);
  if (it == t.header.end()) {
    throw ConfigError("table has no column '" + name + "'");
  }
  return static_cast<int>(it - t.header.begin());
}

double cell(const std::string &text) {
  double v = std::numeric_limits<double>::quiet_NaN();
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  return res.ec == std::errc() ? v : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

std::string render_svg(const Table &table, const PlotSpec &spec) {
  int xc = column(table, spec.x);
  int xh = spec.x_hi.empty() ? -1 : column(table, spec.x_hi);
  std::vector<std::string> names = spec.y;
  if (names.empty()) {
    for (const std::string &h : table.header) {
      if (h.size() > spec.y_suffix.size() && h.ends_with(spec.y_suffix) && h != spec.x && h != spec.x_hi) {
        names.push_back(h);
      }
    }
  }
  std::vector<double> xs;
  std::vector<std::vector<double>> ys(names.size());
  for (const auto &row : table.rows) {
    double x = cell(row[xc]);
    if (xh >= 0) {
      x = 0.5 * (x + cell(row[xh]));
    }
    xs.push_back(x);
    for (size_t s = 0; s < names.size(); ++s) {
      double y = cell(row[column(table, names[s])]);
      if (spec.log_y) {
        y = y > 0 ? std::log10(y) : std::numeric_limits<double>::quiet_NaN();
      }
      ys[s].push_back(y);
    }
  }
  double x_lo = std::numeric_limits<double>::infinity();
  double x_hi = -x_lo;
  double y_lo = x_lo;
  double y_hi = -x_lo;
  for (size_t i = 0; i < xs.size(); ++i) {
    for (const auto &series : ys) {
      if (std::isfinite(xs[i]) && std::isfinite(series[i])) {
        x_lo = std::min(x_lo, xs[i]);
        x_hi = std::max(x_hi, xs[i]);
        y_lo = std::min(y_lo, series[i]);
        y_hi = std::max(y_hi, series[i]);
      }
    }
  }
  if (!std::isfinite(x_lo)) {
    x_lo = y_lo = 0;
    x_hi = y_hi = 1;
  }
  if (x_hi == x_lo) {
    x_lo -= 0.5;
    x_hi += 0.5;
  }
  if (y_hi == y_lo) {
    y_lo -= 0.5;
    y_hi += 0.5;
  }
  double plot_w = kWidth - kLeft - kRight;
  double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * plot_w; };
  auto py = [&](double y) { return kTop + (y_hi - y) / (y_hi - y_lo) * plot_h; };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  if (!table.meta.empty()) {
    svg << "<!--";
    for (const auto &[k, v] : table.meta) {
      svg << " " << escape(k) << "=" << escape(v);
    }
    svg << " -->\n";
  }
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << fixed(kLeft + plot_w / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
      << escape(spec.title) << "</text>\n";
  svg << "<rect x=\"" << fixed(kLeft) << "\" y=\"" << fixed(kTop) << "\" width=\"" << fixed(plot_w) << "\" height=\""
      << fixed(plot_h) << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    double xv = x_lo + (x_hi - x_lo) * t / 4;
    double yv = y_lo + (y_hi - y_lo) * t / 4;
    svg << "<text x=\"" << fixed(px(xv)) << "\" y=\"" << fixed(kTop + plot_h + 16) << "\" text-anchor=\"middle\">"
        << tick_label(xv) << "</text>\n";
    std::string ylab = spec.log_y ? "1e" + tick_label(yv) : tick_label(yv);
    svg << "<text x=\"" << fixed(kLeft - 6) << "\" y=\"" << fixed(py(yv) + 4) << "\" text-anchor=\"end\">" << ylab
        << "</text>\n";
  }
  svg << "<text x=\"" << fixed(kLeft + plot_w / 2) << "\" y=\"" << fixed(kHeight - 10)
      << "\" text-anchor=\"middle\">" << escape(spec.x_label) << "</text>\n";
  svg << "<text transform=\"translate(16," << fixed(kTop + plot_h / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
      << escape(spec.y_label) << "</text>\n";
  for (size_t s = 0; s < names.size(); ++s) {
    const char *color = kColors[s % std::size(kColors)];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (size_t i = 0; i < xs.size(); ++i) {
      if (!std::isfinite(xs[i]) || !std::isfinite(ys[s][i])) {
        continue;
      }
      svg << (first ? "" : " ") << fixed(px(xs[i])) << "," << fixed(py(ys[s][i]));
      first = false;
    }
    svg << "\"/>\n";
    double ly = kTop + 14 + 18 * static_cast<double>(s);
    svg << "<line x1=\"" << fixed(kWidth - kRight + 10) << "\" y1=\"" << fixed(ly - 4) << "\" x2=\""
        << fixed(kWidth - kRight + 30) << "\" y2=\"" << fixed(ly - 4) << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << fixed(kWidth - kRight + 34) << "\" y=\"" << fixed(ly) << "\">" << escape(names[s])
        << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace gbs
