// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The skycast Authors
#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <string>
#include <vector>

#include <json.hpp>

#include "skycast/dataset/image.hpp"
#include "skycast/dataset/preprocess.hpp"
#include "skycast/json_util.hpp"
#include "skycast/metrics/plot.hpp"
#include "skycast/numcore/tensor.hpp"

namespace skycast::explain {

enum class HeadFusion { mean, max, min };

inline HeadFusion parse_head_fusion(const std::string& s) {
  if (s == "mean") return HeadFusion::mean;
  if (s == "max") return HeadFusion::max;
  if (s == "min") return HeadFusion::min;
  throw ConfigError("unknown head fusion '" + s + "' (expected mean, max or min)");
}

inline const char* head_fusion_name(HeadFusion f) {
  switch (f) {
    case HeadFusion::mean: return "mean";
    case HeadFusion::max: return "max";
    case HeadFusion::min: return "min";
  }
  return "?";
}

struct RolloutConfig {
  HeadFusion head_fusion = HeadFusion::mean;
  double discard_ratio = 0.9;

  void validate() const {
    if (discard_ratio < 0 || discard_ratio >= 1) throw ConfigError("rollout: discard_ratio must lie in [0, 1)");
  }
};

inline nlohmann::json to_json(const RolloutConfig& c) {
  return {{"head_fusion", head_fusion_name(c.head_fusion)}, {"discard_ratio", c.discard_ratio}};
}

inline RolloutConfig rollout_config_from_json(const nlohmann::json& j) {
  check_keys(j, {"head_fusion", "discard_ratio"}, "explain");
  RolloutConfig c;
  if (j.contains("head_fusion")) c.head_fusion = parse_head_fusion(j["head_fusion"].get<std::string>());
  read_opt(j, "discard_ratio", c.discard_ratio, "explain");
  c.validate();
  return c;
}

/// Square row-major matrix of doubles.
struct Matrix {
  std::size_t n = 0;
  std::vector<double> v;

  static Matrix identity(std::size_t n) {
    Matrix m{n, std::vector<double>(n * n, 0.0)};
    for (std::size_t i = 0; i < n; ++i) m.v[i * n + i] = 1.0;
    return m;
  }
  double& at(std::size_t r, std::size_t c) { return v[r * n + c]; }
  double at(std::size_t r, std::size_t c) const { return v[r * n + c]; }
};

inline Matrix matmul(const Matrix& a, const Matrix& b) {
  Matrix out{a.n, std::vector<double>(a.n * a.n, 0.0)};
  for (std::size_t i = 0; i < a.n; ++i)
    for (std::size_t p = 0; p < a.n; ++p) {
      const double av = a.at(i, p);
      for (std::size_t j = 0; j < a.n; ++j) out.v[i * a.n + j] += av * b.at(p, j);
    }
  return out;
}

/// Fuses the heads of one [heads, n, n] attention tensor.
template <typename T>
Matrix fuse_heads(const numcore::Tensor<T>& attn, HeadFusion f) {
  if (attn.rank() != 3 || attn.dim(1) != attn.dim(2))
    throw ContractError("rollout: attention must be [heads, n, n], got " + numcore::shape_str(attn.shape()));
  const std::size_t h = attn.dim(0), n = attn.dim(1);
  const auto d = attn.data();
  Matrix m{n, std::vector<double>(n * n, 0.0)};
  for (std::size_t e = 0; e < n * n; ++e) {
    double acc = static_cast<double>(d[e]);
    for (std::size_t k = 1; k < h; ++k) {
      const double x = static_cast<double>(d[k * n * n + e]);
      if (f == HeadFusion::mean) acc += x;
      else if (f == HeadFusion::max) acc = std::max(acc, x);
      else acc = std::min(acc, x);
    }
    m.v[e] = f == HeadFusion::mean ? acc / static_cast<double>(h) : acc;
  }
  return m;
}

/// Zeroes the floor(ratio * n * n) smallest entries, never the (0, 0)
/// class-token self entry; ties break by position.
inline void discard_lowest(Matrix& m, double ratio) {
  const std::size_t count = static_cast<std::size_t>(ratio * static_cast<double>(m.v.size()));
  if (count == 0) return;
  std::vector<std::size_t> idx(m.v.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return m.v[a] < m.v[b]; });
  for (std::size_t i = 0; i < count; ++i)
    if (idx[i] != 0) m.v[idx[i]] = 0.0;
}

/// Adds the identity for the residual path and normalizes every row.
inline void residual_normalize(Matrix& m) {
  for (std::size_t i = 0; i < m.n; ++i) {
    m.at(i, i) += 1.0;
    double s = 0;
    for (std::size_t j = 0; j < m.n; ++j) s += m.at(i, j);
    for (std::size_t j = 0; j < m.n; ++j) m.at(i, j) /= s;
  }
}

/// Product A_L ... A_1 of the residual-normalized per-layer matrices.
template <typename T>
Matrix rollout_matrix(const std::vector<numcore::Tensor<T>>& layers, const RolloutConfig& cfg) {
  cfg.validate();
  if (layers.empty()) throw ContractError("rollout: no attention layers");
  const auto shape = layers.front().shape();
  Matrix result = Matrix::identity(shape.size() == 3 ? shape[1] : 0);
  for (const auto& a : layers) {
    if (a.shape() != shape) throw ContractError("rollout: layer attention shapes differ");
    Matrix m = fuse_heads(a, cfg.head_fusion);
    discard_lowest(m, cfg.discard_ratio);
    residual_normalize(m);
    result = matmul(m, result);
  }
  return result;
}

/// Per-patch relevance on the patch grid, scaled so the maximum is 1 (an
/// all-zero map stays zero).
struct AttentionMap {
  std::size_t grid = 0;
  std::vector<double> values;  // grid * grid, row-major

  double at(std::size_t r, std::size_t c) const { return values[r * grid + c]; }
};

template <typename T>
AttentionMap attention_rollout(const std::vector<numcore::Tensor<T>>& layers, const RolloutConfig& cfg) {
  const Matrix r = rollout_matrix(layers, cfg);
  const std::size_t patches = r.n - 1;
  const auto grid = static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(patches))));
  if (grid * grid != patches) throw ContractError("rollout: token count is not 1 + a square patch grid");
  AttentionMap m{grid, std::vector<double>(patches)};
  double peak = 0;
  for (std::size_t p = 0; p < patches; ++p) {
    m.values[p] = std::max(0.0, r.at(0, p + 1));
    peak = std::max(peak, m.values[p]);
  }
  if (peak > 0)
    for (auto& v : m.values) v /= peak;
  return m;
}

/// Jet-coloured relevance blended half and half over `image`; pure black
/// (masked) pixels are left black. The map is upsampled bilinearly.
inline data::Image overlay(const AttentionMap& map, const data::Image& image, double alpha = 0.5) {
  if (image.channels != 3) throw ContractError("overlay: expected an RGB image");
  data::Image grid(map.grid, map.grid, 1);
  for (std::size_t i = 0; i < map.values.size(); ++i) grid.pixels[i] = static_cast<float>(map.values[i]);
  const auto up = data::resize_bilinear(grid, image.height, image.width);
  data::Image out = image;
  for (std::size_t y = 0; y < image.height; ++y)
    for (std::size_t x = 0; x < image.width; ++x) {
      if (image.at(y, x, 0) == 0 && image.at(y, x, 1) == 0 && image.at(y, x, 2) == 0) continue;
      const auto c = metrics::jet(up.at(y, x, 0));
      const float a = static_cast<float>(alpha);
      out.at(y, x, 0) = (1 - a) * image.at(y, x, 0) + a * c.r;
      out.at(y, x, 1) = (1 - a) * image.at(y, x, 1) + a * c.g;
      out.at(y, x, 2) = (1 - a) * image.at(y, x, 2) + a * c.b;
    }
  return out;
}

inline void write_map_csv(const AttentionMap& m, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw InputError("cannot write " + path.string());
  char buf[32];
  for (std::size_t r = 0; r < m.grid; ++r) {
    for (std::size_t c = 0; c < m.grid; ++c) {
      std::snprintf(buf, sizeof buf, "%.6f", m.at(r, c));
      f << (c ? "," : "") << buf;
    }
    f << '\n';
  }
}

}  // namespace skycast::explain
