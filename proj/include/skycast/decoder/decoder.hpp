// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The skycast Authors
#pragma once

#include <random>
#include <string>
#include <vector>

#include "skycast/backbone/block.hpp"
#include "skycast/backbone/config.hpp"
#include "skycast/backbone/vit.hpp"

namespace skycast::model {

/// Causal decoder over frame encodings. Encodings of width D are bridged
/// into model_dim and back; learned temporal embeddings are added by
/// absolute position.
template <typename T>
class CausalDecoder {
 public:
  CausalDecoder() = default;
  CausalDecoder(const DecoderConfig& cfg, std::size_t encoding_dim, ParamSet<T>& ps, std::mt19937_64& rng,
                const std::string& prefix = "decoder")
      : cfg_(cfg), dim_(encoding_dim) {
    cfg_.validate();
    in_ = LinearParams<T>::make(ps, prefix + ".in_proj", dim_, cfg_.model_dim, rng);
    pos_ = add_weight(ps, prefix + ".pos_embed", {cfg_.max_sequence, cfg_.model_dim}, rng);
    for (std::size_t i = 0; i < cfg_.depth; ++i)
      blocks_.push_back(TransformerBlock<T>::make(ps, prefix + ".blocks." + std::to_string(i), cfg_.model_dim,
                                                  cfg_.heads, cfg_.mlp_ratio, true, rng));
    norm_ = LayerNormParams<T>::make(ps, prefix + ".norm", cfg_.model_dim);
    out_ = LinearParams<T>::make(ps, prefix + ".out_proj", cfg_.model_dim, dim_, rng);
  }

  const DecoderConfig& config() const { return cfg_; }
  std::size_t encoding_dim() const { return dim_; }

  /// z [s, D] -> predicted next encodings [s, D]; row i sees rows 0..i only.
  Tensor<T> decode(const Tensor<T>& z) const {
    if (z.rank() != 2 || z.dim(1) != dim_)
      throw ShapeError("decode: expected [s, " + std::to_string(dim_) + "], got " + numcore::shape_str(z.shape()));
    const std::size_t s = z.dim(0);
    if (s > cfg_.max_sequence)
      throw ContractError("decode: sequence length " + std::to_string(s) + " exceeds max_sequence " +
                          std::to_string(cfg_.max_sequence));
    auto x = numcore::add(in_(z), numcore::slice_rows(pos_, 0, s));
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
      x = blocks_[i](x).x;
      numcore::check_finite(x, "decoder block " + std::to_string(i));
    }
    return out_(norm_(x));
  }

 private:
  DecoderConfig cfg_;
  std::size_t dim_ = 0;
  LinearParams<T> in_;
  Tensor<T> pos_;
  std::vector<TransformerBlock<T>> blocks_;
  LayerNormParams<T> norm_;
  LinearParams<T> out_;
};

/// Everything one forward pass over a sequence produces.
template <typename T>
struct ForecastBundle {
  Tensor<T> in_window_encodings;             // [s, D]: predictions of frames 2..s+1
  std::vector<Tensor<T>> unrolled_encodings;  // k-1 rows [1, D]: frames s+2..s+k
  Tensor<T> in_window_irradiance;            // [s-1, 1]: frames 2..s (absent when s == 1)
  std::vector<Tensor<T>> forecasts;           // k scalars [1, 1]: frames s+1..s+k
};

/// Autoregressive forecast: decode the observed context, append the newest
/// predicted encoding, decode again; forecast j is the irradiance head on
/// the last output of pass j.
template <typename T>
ForecastBundle<T> unroll(const CausalDecoder<T>& dec, const LinearHead<T>& head, const Tensor<T>& context,
                         std::size_t k) {
  if (k == 0) throw ContractError("unroll: horizon must be >= 1");
  const std::size_t s = context.dim(0);
  if (s + k > dec.config().max_sequence)
    throw ContractError("unroll: context " + std::to_string(s) + " + horizon " + std::to_string(k) +
                        " exceeds max_sequence " + std::to_string(dec.config().max_sequence));
  ForecastBundle<T> b;
  auto out = dec.decode(context);
  b.in_window_encodings = out;
  if (s > 1) b.in_window_irradiance = head(numcore::slice_rows(out, 0, s - 1));
  auto newest = numcore::slice_rows(out, s - 1, 1);
  b.forecasts.push_back(head(newest));
  auto seq = context;
  for (std::size_t j = 1; j < k; ++j) {
    seq = numcore::concat_rows<T>({seq, newest});
    out = dec.decode(seq);
    newest = numcore::slice_rows(out, seq.dim(0) - 1, 1);
    b.unrolled_encodings.push_back(newest);
    b.forecasts.push_back(head(newest));
  }
  return b;
}

}  // namespace skycast::model
