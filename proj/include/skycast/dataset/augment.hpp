// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The skycast Authors
#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "skycast/dataset/image.hpp"

namespace skycast::data {

/// Factor 1 and shift 0 leave a channel untouched; the hue shift is a
/// fraction of the full hue circle. Positive rotation is counter-clockwise
/// as displayed (y axis pointing down).
struct AugmentParams {
  double brightness = 1.0;
  double contrast = 1.0;
  double saturation = 1.0;
  double hue_shift = 0.0;
  double rotation_deg = 0.0;
};

struct AugmentRanges {
  double jitter = 0.01;
  double max_rotation_deg = 15.0;
};

inline AugmentParams draw_augment_params(std::mt19937_64& rng, const AugmentRanges& r = {}) {
  std::uniform_real_distribution<double> j(-r.jitter, r.jitter);
  std::uniform_real_distribution<double> rot(-r.max_rotation_deg, r.max_rotation_deg);
  AugmentParams p;
  p.brightness = 1.0 + j(rng);
  p.contrast = 1.0 + j(rng);
  p.saturation = 1.0 + j(rng);
  p.hue_shift = j(rng);
  p.rotation_deg = rot(rng);
  return p;
}

namespace detail {

inline float gray_of(float r, float g, float b) { return 0.299f * r + 0.587f * g + 0.114f * b; }

inline void rgb_to_hsv(float r, float g, float b, float& h, float& s, float& v) {
  const float mx = std::max({r, g, b}), mn = std::min({r, g, b}), d = mx - mn;
  v = mx;
  s = mx > 0 ? d / mx : 0.0f;
  if (d <= 0) {
    h = 0;
    return;
  }
  if (mx == r) h = std::fmod((g - b) / d, 6.0f);
  else if (mx == g) h = (b - r) / d + 2.0f;
  else h = (r - g) / d + 4.0f;
  h /= 6.0f;
  if (h < 0) h += 1.0f;
}

inline void hsv_to_rgb(float h, float s, float v, float& r, float& g, float& b) {
  const float hh = (h - std::floor(h)) * 6.0f;
  const int i = static_cast<int>(hh) % 6;
  const float f = hh - std::floor(hh);
  const float p = v * (1 - s), q = v * (1 - s * f), t = v * (1 - s * (1 - f));
  switch (i) {
    case 0: r = v, g = t, b = p; break;
    case 1: r = q, g = v, b = p; break;
    case 2: r = p, g = v, b = t; break;
    case 3: r = p, g = q, b = v; break;
    case 4: r = t, g = p, b = v; break;
    default: r = v, g = p, b = q; break;
  }
}

}  // namespace detail

/// Rotation about the image centre with bilinear sampling; samples outside
/// the source read as 0.
inline Image rotate(const Image& src, double degrees) {
  if (degrees == 0.0) return src;
  Image out(src.height, src.width, src.channels);
  const double a = degrees * std::numbers::pi / 180.0;
  const double ca = std::cos(a), sa = std::sin(a);
  const double cx = (static_cast<double>(src.width) - 1) / 2, cy = (static_cast<double>(src.height) - 1) / 2;
  auto sample = [&](long y, long x, std::size_t c) -> double {
    if (y < 0 || x < 0 || y >= static_cast<long>(src.height) || x >= static_cast<long>(src.width)) return 0.0;
    return src.at(static_cast<std::size_t>(y), static_cast<std::size_t>(x), c);
  };
  for (std::size_t y = 0; y < src.height; ++y)
    for (std::size_t x = 0; x < src.width; ++x) {
      const double dx = static_cast<double>(x) - cx, dy = static_cast<double>(y) - cy;
      // Inverse map: a counter-clockwise display rotation with y down.
      double sx = cx + ca * dx - sa * dy;
      double sy = cy + sa * dx + ca * dy;
      const double rx = std::round(sx), ry = std::round(sy);
      if (std::abs(sx - rx) < 1e-9) sx = rx;
      if (std::abs(sy - ry) < 1e-9) sy = ry;
      const long x0 = static_cast<long>(std::floor(sx)), y0 = static_cast<long>(std::floor(sy));
      const double wx = sx - static_cast<double>(x0), wy = sy - static_cast<double>(y0);
      for (std::size_t c = 0; c < src.channels; ++c) {
        const double v = (sample(y0, x0, c) * (1 - wx) + sample(y0, x0 + 1, c) * wx) * (1 - wy) +
                         (sample(y0 + 1, x0, c) * (1 - wx) + sample(y0 + 1, x0 + 1, c) * wx) * wy;
        out.at(y, x, c) = static_cast<float>(v);
      }
    }
  return out;
}

/// Brightness, contrast, saturation, hue (in that order), then rotation.
/// Identity parameters return the input unchanged bit for bit.
inline Image apply_augment(const Image& src, const AugmentParams& p) {
  Image img = src;
  const std::size_t n = img.height * img.width;
  if (img.channels == 3) {
    float* px = img.pixels.data();
    if (p.brightness != 1.0)
      for (auto& v : img.pixels) v = std::clamp(static_cast<float>(v * p.brightness), 0.0f, 1.0f);
    if (p.contrast != 1.0) {
      double mean = 0;
      for (std::size_t i = 0; i < n; ++i) mean += detail::gray_of(px[3 * i], px[3 * i + 1], px[3 * i + 2]);
      mean /= static_cast<double>(n);
      for (auto& v : img.pixels) v = std::clamp(static_cast<float>((v - mean) * p.contrast + mean), 0.0f, 1.0f);
    }
    if (p.saturation != 1.0)
      for (std::size_t i = 0; i < n; ++i) {
        const float g = detail::gray_of(px[3 * i], px[3 * i + 1], px[3 * i + 2]);
        for (int c = 0; c < 3; ++c)
          px[3 * i + c] = std::clamp(static_cast<float>(g + (px[3 * i + c] - g) * p.saturation), 0.0f, 1.0f);
      }
    if (p.hue_shift != 0.0)
      for (std::size_t i = 0; i < n; ++i) {
        float h, s, v;
        detail::rgb_to_hsv(px[3 * i], px[3 * i + 1], px[3 * i + 2], h, s, v);
        detail::hsv_to_rgb(h + static_cast<float>(p.hue_shift), s, v, px[3 * i], px[3 * i + 1], px[3 * i + 2]);
      }
  }
  return rotate(img, p.rotation_deg);
}

/// Draws parameters from a generator seeded with `seed` and applies them.
inline Image augment(const Image& src, std::uint64_t seed, const AugmentRanges& r = {}) {
  std::mt19937_64 rng(seed);
  return apply_augment(src, draw_augment_params(rng, r));
}

}  // namespace skycast::data
