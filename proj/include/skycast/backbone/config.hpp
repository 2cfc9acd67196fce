// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The skycast Authors
#pragma once

#include <string>

#include <json.hpp>

#include "skycast/json_util.hpp"

namespace skycast::model {

struct BackboneConfig {
  std::size_t image_side = 224;
  std::size_t patch_side = 16;
  std::size_t embed_dim = 768;
  std::size_t depth = 12;
  std::size_t heads = 12;
  double mlp_ratio = 4.0;
  bool dual_exposure = false;

  std::size_t grid() const { return image_side / patch_side; }
  std::size_t patch_count() const { return grid() * grid(); }
  std::size_t token_count() const { return patch_count() + 1; }
  std::size_t patch_length() const { return patch_side * patch_side * 3; }

  void validate() const {
    if (patch_side == 0 || image_side == 0 || image_side % patch_side != 0)
      throw ConfigError("backbone: image_side must be a positive multiple of patch_side");
    if (heads == 0 || embed_dim == 0 || embed_dim % heads != 0)
      throw ConfigError("backbone: embed_dim must be divisible by heads");
    if (depth == 0) throw ConfigError("backbone: depth must be >= 1");
    if (!(mlp_ratio > 0)) throw ConfigError("backbone: mlp_ratio must be positive");
  }

  static BackboneConfig full() { return {}; }
  static BackboneConfig tiny() { return {32, 8, 64, 2, 4, 4.0, false}; }
};

struct DecoderConfig {
  std::size_t model_dim = 512;
  std::size_t depth = 4;
  std::size_t heads = 8;
  std::size_t max_sequence = 16;
  double mlp_ratio = 4.0;

  void validate() const {
    if (heads == 0 || model_dim == 0 || model_dim % heads != 0)
      throw ConfigError("decoder: model_dim must be divisible by heads");
    if (depth == 0 || max_sequence == 0) throw ConfigError("decoder: depth and max_sequence must be >= 1");
    if (!(mlp_ratio > 0)) throw ConfigError("decoder: mlp_ratio must be positive");
  }

  static DecoderConfig full() { return {}; }
  static DecoderConfig tiny() { return {32, 2, 4, 16, 4.0}; }
};

inline nlohmann::json to_json(const BackboneConfig& c) {
  return {{"image_side", c.image_side}, {"patch_side", c.patch_side}, {"embed_dim", c.embed_dim},
          {"depth", c.depth},           {"heads", c.heads},           {"mlp_ratio", c.mlp_ratio},
          {"dual_exposure", c.dual_exposure}};
}

inline BackboneConfig backbone_config_from_json(const nlohmann::json& j, BackboneConfig c = {}) {
  const std::string w = "backbone";
  check_keys(j, {"image_side", "patch_side", "embed_dim", "depth", "heads", "mlp_ratio", "dual_exposure"}, w);
  read_opt(j, "image_side", c.image_side, w);
  read_opt(j, "patch_side", c.patch_side, w);
  read_opt(j, "embed_dim", c.embed_dim, w);
  read_opt(j, "depth", c.depth, w);
  read_opt(j, "heads", c.heads, w);
  read_opt(j, "mlp_ratio", c.mlp_ratio, w);
  read_opt(j, "dual_exposure", c.dual_exposure, w);
  c.validate();
  return c;
}

inline nlohmann::json to_json(const DecoderConfig& c) {
  return {{"model_dim", c.model_dim}, {"depth", c.depth},         {"heads", c.heads},
          {"max_sequence", c.max_sequence}, {"mlp_ratio", c.mlp_ratio}};
}

inline DecoderConfig decoder_config_from_json(const nlohmann::json& j, DecoderConfig c = {}) {
  const std::string w = "decoder";
  check_keys(j, {"model_dim", "depth", "heads", "max_sequence", "mlp_ratio"}, w);
  read_opt(j, "model_dim", c.model_dim, w);
  read_opt(j, "depth", c.depth, w);
  read_opt(j, "heads", c.heads, w);
  read_opt(j, "max_sequence", c.max_sequence, w);
  read_opt(j, "mlp_ratio", c.mlp_ratio, w);
  c.validate();
  return c;
}

}  // namespace skycast::model
