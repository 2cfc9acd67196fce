// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The skycast Authors
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <optional>
#include <vector>

#include "skycast/dataset/image.hpp"

namespace skycast::data {

struct CropRect {
  std::size_t x = 0, y = 0, width = 0, height = 0;
};

using Polygon = std::vector<std::array<double, 2>>;  // (x, y) in output pixel units

/// Pixels selected by any component are set to exactly 0 after resizing.
/// Polygons and the circle test pixel centres; the bitmap is given at the
/// output resolution with nonzero meaning masked.
struct MaskSpec {
  std::vector<Polygon> polygons;
  std::vector<std::uint8_t> bitmap;
  std::size_t bitmap_side = 0;
  double outside_circle_fraction = 0;  // >0 masks pixels beyond this fraction of side/2 from the centre

  bool empty() const { return polygons.empty() && bitmap.empty() && outside_circle_fraction <= 0; }
};

/// Black (mean < 0.5) pixels in the PNG become masked.
inline MaskSpec mask_from_png(const std::filesystem::path& path) {
  Image m = read_png(path);
  if (m.height != m.width) throw InputError("mask PNG must be square: " + path.string());
  MaskSpec spec;
  spec.bitmap_side = m.width;
  spec.bitmap.resize(m.width * m.height);
  for (std::size_t i = 0; i < spec.bitmap.size(); ++i) {
    const float mean = (m.pixels[3 * i] + m.pixels[3 * i + 1] + m.pixels[3 * i + 2]) / 3.0f;
    spec.bitmap[i] = mean < 0.5f ? 1 : 0;
  }
  return spec;
}

inline bool point_in_polygon(double x, double y, const Polygon& poly) {
  bool inside = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const auto& a = poly[i];
    const auto& b = poly[j];
    if ((a[1] > y) != (b[1] > y) && x < (b[0] - a[0]) * (y - a[1]) / (b[1] - a[1]) + a[0]) inside = !inside;
  }
  return inside;
}

/// 1 marks a masked pixel, row-major side x side.
inline std::vector<std::uint8_t> build_mask(const MaskSpec& spec, std::size_t side) {
  std::vector<std::uint8_t> m(side * side, 0);
  if (!spec.bitmap.empty()) {
    if (spec.bitmap_side != side || spec.bitmap.size() != side * side)
      throw ConfigError("mask bitmap side " + std::to_string(spec.bitmap_side) + " does not match image side " +
                        std::to_string(side));
    m = spec.bitmap;
  }
  const double c = static_cast<double>(side) / 2.0;
  const double r = spec.outside_circle_fraction * c;
  for (std::size_t y = 0; y < side; ++y)
    for (std::size_t x = 0; x < side; ++x) {
      const double px = static_cast<double>(x) + 0.5, py = static_cast<double>(y) + 0.5;
      if (spec.outside_circle_fraction > 0 && std::hypot(px - c, py - c) > r) m[y * side + x] = 1;
      for (const auto& poly : spec.polygons)
        if (poly.size() >= 3 && point_in_polygon(px, py, poly)) m[y * side + x] = 1;
    }
  return m;
}

inline void apply_mask(Image& img, const std::vector<std::uint8_t>& mask) {
  if (mask.size() != img.height * img.width) throw ShapeError("apply_mask: mask size mismatch");
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i])
      for (std::size_t c = 0; c < img.channels; ++c) img.pixels[i * img.channels + c] = 0.0f;
}

inline Image crop(const Image& src, const CropRect& r) {
  if (r.width == 0 || r.height == 0 || r.x + r.width > src.width || r.y + r.height > src.height)
    throw ConfigError("crop rectangle outside the image");
  Image out(r.height, r.width, src.channels);
  for (std::size_t y = 0; y < r.height; ++y)
    for (std::size_t x = 0; x < r.width; ++x)
      for (std::size_t c = 0; c < src.channels; ++c) out.at(y, x, c) = src.at(r.y + y, r.x + x, c);
  return out;
}

/// Largest centred square.
inline CropRect centre_square(const Image& src) {
  const std::size_t s = std::min(src.width, src.height);
  return {(src.width - s) / 2, (src.height - s) / 2, s, s};
}

/// Bilinear resampling with half-pixel centres and edge clamping.
inline Image resize_bilinear(const Image& src, std::size_t out_h, std::size_t out_w) {
  if (out_h == src.height && out_w == src.width) return src;
  Image out(out_h, out_w, src.channels);
  const double sy = static_cast<double>(src.height) / static_cast<double>(out_h);
  const double sx = static_cast<double>(src.width) / static_cast<double>(out_w);
  for (std::size_t y = 0; y < out_h; ++y) {
    const double fy = std::clamp((static_cast<double>(y) + 0.5) * sy - 0.5, 0.0, static_cast<double>(src.height - 1));
    const auto y0 = static_cast<std::size_t>(fy);
    const std::size_t y1 = std::min(y0 + 1, src.height - 1);
    const double wy = fy - static_cast<double>(y0);
    for (std::size_t x = 0; x < out_w; ++x) {
      const double fx = std::clamp((static_cast<double>(x) + 0.5) * sx - 0.5, 0.0, static_cast<double>(src.width - 1));
      const auto x0 = static_cast<std::size_t>(fx);
      const std::size_t x1 = std::min(x0 + 1, src.width - 1);
      const double wx = fx - static_cast<double>(x0);
      for (std::size_t c = 0; c < src.channels; ++c) {
        const double top = src.at(y0, x0, c) * (1 - wx) + src.at(y0, x1, c) * wx;
        const double bot = src.at(y1, x0, c) * (1 - wx) + src.at(y1, x1, c) * wx;
        out.at(y, x, c) = static_cast<float>(top * (1 - wy) + bot * wy);
      }
    }
  }
  return out;
}

struct PreprocessConfig {
  std::size_t side = 224;
  std::optional<CropRect> crop;  // defaults to the centred square
  MaskSpec mask;
};

/// Crop, resize to side x side, then zero the masked pixels.
inline Image preprocess_image(const Image& raw, const PreprocessConfig& cfg,
                              const std::vector<std::uint8_t>* prebuilt_mask = nullptr) {
  if (cfg.side == 0) throw ConfigError("preprocess: side must be positive");
  Image img = crop(raw, cfg.crop ? *cfg.crop : centre_square(raw));
  img = resize_bilinear(img, cfg.side, cfg.side);
  if (prebuilt_mask) apply_mask(img, *prebuilt_mask);
  else if (!cfg.mask.empty()) apply_mask(img, build_mask(cfg.mask, cfg.side));
  return img;
}

}  // namespace skycast::data
