// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The skycast Authors
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "skycast/dataset/image.hpp"
#include "skycast/metrics/metrics.hpp"

namespace skycast::metrics {

struct Rgb {
  float r = 0, g = 0, b = 0;
};

/// Piecewise-linear jet colormap, v in [0, 1].
inline Rgb jet(double v) {
  v = std::clamp(v, 0.0, 1.0);
  auto ch = [&](double centre) { return static_cast<float>(std::clamp(1.5 - std::abs(4.0 * v - centre), 0.0, 1.0)); };
  return {ch(3.0), ch(2.0), ch(1.0)};
}

/// Minimal RGB raster with lines and 3x5 digit glyphs for tick labels.
class Canvas {
 public:
  Canvas(std::size_t w, std::size_t h, Rgb bg = {1, 1, 1}) : img_(h, w, 3) {
    for (std::size_t y = 0; y < h; ++y)
      for (std::size_t x = 0; x < w; ++x) put(static_cast<long>(x), static_cast<long>(y), bg);
  }

  void put(long x, long y, Rgb c) {
    if (x < 0 || y < 0 || x >= static_cast<long>(img_.width) || y >= static_cast<long>(img_.height)) return;
    img_.at(y, x, 0) = c.r;
    img_.at(y, x, 1) = c.g;
    img_.at(y, x, 2) = c.b;
  }

  void line(long x0, long y0, long x1, long y1, Rgb c) {
    const long dx = std::abs(x1 - x0), dy = -std::abs(y1 - y0);
    const long sx = x0 < x1 ? 1 : -1, sy = y0 < y1 ? 1 : -1;
    long err = dx + dy;
    for (;;) {
      put(x0, y0, c);
      if (x0 == x1 && y0 == y1) break;
      const long e2 = 2 * err;
      if (e2 >= dy) err += dy, x0 += sx;
      if (e2 <= dx) err += dx, y0 += sy;
    }
  }

  void fill(long x0, long y0, long x1, long y1, Rgb c) {
    for (long y = y0; y < y1; ++y)
      for (long x = x0; x < x1; ++x) put(x, y, c);
  }

  /// Draws digits, '.', and '-'; other characters advance the cursor.
  void text(long x, long y, const std::string& s, Rgb c) {
    static const std::array<unsigned short, 12> glyphs = {
        0x7B6F, 0x2C97, 0x73E7, 0x73CF, 0x5BC9, 0x79CF, 0x79EF, 0x7249, 0x7BEF, 0x7BCF, 0x0002, 0x01C0};
    for (char ch : s) {
      int g = -1;
      if (ch >= '0' && ch <= '9') g = ch - '0';
      else if (ch == '.') g = 10;
      else if (ch == '-') g = 11;
      if (g >= 0)
        for (int row = 0; row < 5; ++row)
          for (int col = 0; col < 3; ++col)
            if (glyphs[g] >> (14 - row * 3 - col) & 1) put(x + col, y + row, c);
      x += 4;
    }
  }

  const data::Image& image() const { return img_; }

 private:
  data::Image img_;
};

struct Series {
  std::vector<double> y;
  Rgb color;
};

/// Line chart of several equally sampled series sharing one y axis.
inline data::Image line_plot(const std::vector<Series>& series, std::size_t width = 640, std::size_t height = 320) {
  Canvas cv(width, height);
  const long left = 40, right = static_cast<long>(width) - 10, top = 10, bottom = static_cast<long>(height) - 20;
  double lo = 0, hi = 1;
  std::size_t n = 0;
  for (const auto& s : series) {
    n = std::max(n, s.y.size());
    for (double v : s.y) hi = std::max(hi, v), lo = std::min(lo, v);
  }
  const Rgb axis{0, 0, 0}, grid{0.85f, 0.85f, 0.85f};
  for (int i = 0; i <= 4; ++i) {
    const long y = bottom - (bottom - top) * i / 4;
    cv.line(left, y, right, y, grid);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.0f", lo + (hi - lo) * i / 4.0);
    cv.text(2, y - 2, buf, axis);
  }
  cv.line(left, top, left, bottom, axis);
  cv.line(left, bottom, right, bottom, axis);
  if (n < 2) return cv.image();
  auto px = [&](std::size_t i) { return left + static_cast<long>(std::lround(double(i) * double(right - left) / double(n - 1))); };
  auto py = [&](double v) { return bottom - static_cast<long>(std::lround((v - lo) / (hi - lo) * double(bottom - top))); };
  for (const auto& s : series)
    for (std::size_t i = 1; i < s.y.size(); ++i) cv.line(px(i - 1), py(s.y[i - 1]), px(i), py(s.y[i]), s.color);
  return cv.image();
}

/// Density heat map: x is prediction, y is ground truth (upwards), colours
/// are log-scaled counts; empty cells stay white.
inline data::Image density_plot(const Histogram2D& h, std::size_t cell = 8) {
  const long margin = 30;
  const long side = static_cast<long>(h.bins * cell);
  Canvas cv(static_cast<std::size_t>(side + margin + 10), static_cast<std::size_t>(side + margin + 10));
  std::size_t peak = 0;
  for (auto c : h.counts) peak = std::max(peak, c);
  const long x0 = margin, y1 = side + 10;
  for (std::size_t yi = 0; yi < h.bins; ++yi)
    for (std::size_t xi = 0; xi < h.bins; ++xi) {
      const auto c = h.at(yi, xi);
      if (c == 0) continue;
      const double v = std::log1p(double(c)) / std::log1p(double(peak));
      const long cx = x0 + static_cast<long>(xi * cell), cy = y1 - static_cast<long>((yi + 1) * cell);
      cv.fill(cx, cy, cx + static_cast<long>(cell), cy + static_cast<long>(cell), jet(v));
    }
  const Rgb axis{0, 0, 0};
  cv.line(x0, y1, x0 + side, y1 - side, Rgb{0.5f, 0.5f, 0.5f});
  cv.line(x0, 10, x0, y1, axis);
  cv.line(x0, y1, x0 + side, y1, axis);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.0f", h.max_value);
  cv.text(x0 + side - 16, y1 + 6, buf, axis);
  cv.text(2, 10, buf, axis);
  cv.text(x0 - 6, y1 + 6, "0", axis);
  return cv.image();
}

inline void write_plot(const data::Image& img, const std::filesystem::path& path) { data::write_png(img, path); }

}  // namespace skycast::metrics
