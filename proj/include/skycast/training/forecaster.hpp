// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The skycast Authors
#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "skycast/backbone.hpp"
#include "skycast/decoder.hpp"

namespace skycast::model {

inline constexpr const char* kBackbonePrefix = "backbone.";
inline constexpr const char* kAdapterPrefix = "adapter.";
inline constexpr const char* kStage1HeadPrefix = "stage1_head.";
inline constexpr const char* kDecoderPrefix = "decoder.";
inline constexpr const char* kIrradianceHeadPrefix = "irradiance_head.";

/// The full model: optional exposure adapter, ViT backbone, stage-1
/// regression head, causal decoder and irradiance head, all registered in
/// one parameter set.
template <typename T>
class Forecaster {
 public:
  Forecaster(const BackboneConfig& bcfg, const DecoderConfig& dcfg, std::uint64_t seed) : bcfg_(bcfg), dcfg_(dcfg) {
    bcfg_.validate();
    dcfg_.validate();
    std::mt19937_64 rng(seed);
    if (bcfg_.dual_exposure) adapter_ = ExposureAdapter<T>::make(params_, "adapter");
    backbone_ = ViTBackbone<T>(bcfg_, params_, rng, "backbone");
    stage1_head_ = LinearHead<T>::make(params_, "stage1_head", bcfg_.embed_dim, rng);
    decoder_ = CausalDecoder<T>(dcfg_, bcfg_.embed_dim, params_, rng, "decoder");
    irradiance_head_ = LinearHead<T>::make(params_, "irradiance_head", bcfg_.embed_dim, rng);
  }
  Forecaster(const Forecaster&) = delete;
  Forecaster& operator=(const Forecaster&) = delete;

  const BackboneConfig& backbone_config() const { return bcfg_; }
  const DecoderConfig& decoder_config() const { return dcfg_; }
  numcore::ParamSet<T>& params() { return params_; }
  const numcore::ParamSet<T>& params() const { return params_; }
  const ViTBackbone<T>& backbone() const { return backbone_; }
  const CausalDecoder<T>& decoder() const { return decoder_; }
  const LinearHead<T>& stage1_head() const { return stage1_head_; }
  const LinearHead<T>& irradiance_head() const { return irradiance_head_; }

  /// Backbone input for one frame: the image itself, or the adapted pair,
  /// mapped from [0, 1] to [-1, 1].
  Tensor<T> frame_input(const std::vector<data::Image>& images) const {
    if (bcfg_.dual_exposure) {
      if (images.size() != 2) throw ContractError("dual-exposure model needs an image pair per frame");
      const auto x = adapter_(pair_tensor<T>(images[0], images[1]));
      return numcore::add(numcore::scale(x, T(2)), Tensor<T>::filled(x.shape(), T(-1)));
    }
    if (images.size() != 1) throw ContractError("single-exposure model got " + std::to_string(images.size()) + " images");
    auto x = image_tensor<T>(images[0]);
    for (auto& v : x.mutable_data()) v = T(2) * v - T(1);
    return x;
  }

  Encoding<T> encode(const std::vector<data::Image>& images, bool keep_attention = false) const {
    return backbone_.encode(frame_input(images), keep_attention);
  }

  /// Stage-1 path: normalized irradiance for a single frame, [1, 1].
  Tensor<T> regress(const std::vector<data::Image>& images) const { return stage1_head_(encode(images).z); }

  /// Frozen/unfrozen state of the image path (adapter and backbone).
  void set_backbone_frozen(bool frozen) {
    params_.set_frozen(kBackbonePrefix, frozen);
    params_.set_frozen(kAdapterPrefix, frozen);
  }

 private:
  BackboneConfig bcfg_;
  DecoderConfig dcfg_;
  numcore::ParamSet<T> params_;
  ExposureAdapter<T> adapter_;
  ViTBackbone<T> backbone_;
  LinearHead<T> stage1_head_;
  CausalDecoder<T> decoder_;
  LinearHead<T> irradiance_head_;
};

}  // namespace skycast::model
