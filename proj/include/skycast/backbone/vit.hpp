// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The skycast Authors
#pragma once

#include <random>
#include <string>
#include <vector>

#include "skycast/backbone/block.hpp"
#include "skycast/backbone/config.hpp"
#include "skycast/dataset/image.hpp"

namespace skycast::model {

/// Flat gather index mapping an [H, W, C] image to [patches, patch*patch*C]
/// tokens. Patches are row-major over the grid; each token is row-major over
/// (y, x, channel) inside its patch.
inline std::vector<std::size_t> patch_index(std::size_t side, std::size_t patch, std::size_t channels) {
  if (patch == 0 || side % patch != 0) throw ShapeError("patchify: side not divisible by patch size");
  const std::size_t grid = side / patch;
  std::vector<std::size_t> idx;
  idx.reserve(side * side * channels);
  for (std::size_t gy = 0; gy < grid; ++gy)
    for (std::size_t gx = 0; gx < grid; ++gx)
      for (std::size_t py = 0; py < patch; ++py)
        for (std::size_t px = 0; px < patch; ++px)
          for (std::size_t c = 0; c < channels; ++c)
            idx.push_back(((gy * patch + py) * side + gx * patch + px) * channels + c);
  return idx;
}

template <typename T>
Tensor<T> patchify(const Tensor<T>& image, std::size_t patch) {
  if (image.rank() != 3 || image.dim(0) != image.dim(1))
    throw ShapeError("patchify: expected a square [H, W, C] image, got " + numcore::shape_str(image.shape()));
  const std::size_t side = image.dim(0), c = image.dim(2);
  const std::size_t grid = side / (patch == 0 ? 1 : patch);
  return numcore::gather(image, patch_index(side, patch, c), {grid * grid, patch * patch * c});
}

template <typename T>
std::vector<T> unpatchify(const std::vector<T>& tokens, std::size_t side, std::size_t patch, std::size_t channels) {
  const auto idx = patch_index(side, patch, channels);
  if (tokens.size() != idx.size()) throw ShapeError("unpatchify: token count mismatch");
  std::vector<T> out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out[idx[i]] = tokens[i];
  return out;
}

template <typename T>
Tensor<T> image_tensor(const data::Image& img) {
  std::vector<T> v(img.pixels.begin(), img.pixels.end());
  return Tensor<T>({img.height, img.width, img.channels}, std::move(v));
}

/// Channel-concatenated (short, long) exposure pair: [H, W, 6].
template <typename T>
Tensor<T> pair_tensor(const data::Image& a, const data::Image& b) {
  if (a.height != b.height || a.width != b.width || a.channels != 3 || b.channels != 3)
    throw ShapeError("exposure pair images differ in shape");
  std::vector<T> v(a.height * a.width * 6);
  for (std::size_t i = 0; i < a.height * a.width; ++i)
    for (std::size_t c = 0; c < 3; ++c) {
      v[i * 6 + c] = a.pixels[i * 3 + c];
      v[i * 6 + 3 + c] = b.pixels[i * 3 + c];
    }
  return Tensor<T>({a.height, a.width, 6}, std::move(v));
}

template <typename T>
struct Encoding {
  Tensor<T> z;                        // [1, D]
  std::vector<Tensor<T>> attention;  // per layer [heads, tokens, tokens] when requested
};

/// ViT image encoder: patch projection, class token, learned spatial
/// position embedding, pre-norm blocks and a final layer norm. The encoding
/// is the class-token row.
template <typename T>
class ViTBackbone {
 public:
  ViTBackbone() = default;
  ViTBackbone(const BackboneConfig& cfg, ParamSet<T>& ps, std::mt19937_64& rng, const std::string& prefix = "backbone")
      : cfg_(cfg) {
    cfg_.validate();
    const std::size_t d = cfg_.embed_dim;
    patch_embed_ = LinearParams<T>::make(ps, prefix + ".patch_embed", cfg_.patch_length(), d, rng);
    cls_ = add_weight(ps, prefix + ".cls_token", {1, d}, rng);
    pos_ = add_weight(ps, prefix + ".pos_embed", {cfg_.token_count(), d}, rng);
    for (std::size_t i = 0; i < cfg_.depth; ++i)
      blocks_.push_back(TransformerBlock<T>::make(ps, prefix + ".blocks." + std::to_string(i), d, cfg_.heads,
                                                  cfg_.mlp_ratio, false, rng));
    norm_ = LayerNormParams<T>::make(ps, prefix + ".norm", d);
    index_ = patch_index(cfg_.image_side, cfg_.patch_side, 3);
  }

  const BackboneConfig& config() const { return cfg_; }
  const Tensor<T>& position_embedding() const { return pos_; }

  /// Patch tokens [patches, patch_length] for a [side, side, 3] image.
  Tensor<T> tokens(const Tensor<T>& image) const {
    if (image.rank() != 3 || image.dim(0) != cfg_.image_side || image.dim(1) != cfg_.image_side || image.dim(2) != 3)
      throw ShapeError("backbone: expected [" + std::to_string(cfg_.image_side) + ", " +
                       std::to_string(cfg_.image_side) + ", 3] image, got " + numcore::shape_str(image.shape()));
    return numcore::gather(image, index_, {cfg_.patch_count(), cfg_.patch_length()});
  }

  /// Encodes pre-computed patch tokens; exposed so tests can permute patches.
  Encoding<T> encode_tokens(const Tensor<T>& patches, bool keep_attention = false) const {
    auto x = numcore::concat_rows<T>({cls_, patch_embed_(patches)});
    x = numcore::add(x, pos_);
    Encoding<T> out;
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
      auto r = blocks_[i](x);
      x = r.x;
      numcore::check_finite(x, "backbone block " + std::to_string(i));
      if (keep_attention) out.attention.push_back(r.attention);
    }
    out.z = numcore::slice_rows(norm_(x), 0, 1);
    return out;
  }

  Encoding<T> encode(const Tensor<T>& image, bool keep_attention = false) const {
    return encode_tokens(tokens(image), keep_attention);
  }

 private:
  BackboneConfig cfg_;
  LinearParams<T> patch_embed_;
  Tensor<T> cls_, pos_;
  std::vector<TransformerBlock<T>> blocks_;
  LayerNormParams<T> norm_;
  std::vector<std::size_t> index_;
};

/// Single affine map D -> 1 (also used as the decoder's irradiance head).
template <typename T>
struct LinearHead {
  LinearParams<T> fc;

  static LinearHead make(ParamSet<T>& ps, const std::string& prefix, std::size_t dim, std::mt19937_64& rng) {
    return {LinearParams<T>::make(ps, prefix, dim, 1, rng)};
  }
  Tensor<T> operator()(const Tensor<T>& z) const { return fc(z); }  // [n, D] -> [n, 1]
};

/// 3x3, stride 1, padding 1 convolution from a 6-channel exposure pair to 3
/// channels. Initialized to the mean of the two exposures.
template <typename T>
struct ExposureAdapter {
  Tensor<T> weight, bias;  // [3, 6, 3, 3], [3]

  static ExposureAdapter make(ParamSet<T>& ps, const std::string& prefix) {
    std::vector<T> w(3 * 6 * 9, T(0));
    for (std::size_t c = 0; c < 3; ++c) {
      w[((c * 6 + c) * 3 + 1) * 3 + 1] = T(0.5);
      w[((c * 6 + c + 3) * 3 + 1) * 3 + 1] = T(0.5);
    }
    return {ps.add(prefix + ".weight", Tensor<T>({3, 6, 3, 3}, std::move(w))), add_zeros(ps, prefix + ".bias", {3})};
  }

  Tensor<T> operator()(const Tensor<T>& pair) const {
    if (pair.rank() != 3 || pair.dim(2) != 6)
      throw ContractError("exposure adapter expects a channel-concatenated image pair [H, W, 6], got " +
                          numcore::shape_str(pair.shape()));
    return numcore::conv2d_same(pair, weight, bias);
  }
};

}  // namespace skycast::model
