// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The skycast Authors
#pragma once

#include <random>
#include <string>

#include "skycast/numcore.hpp"

namespace skycast::model {

using numcore::ParamSet;
using numcore::Tensor;

constexpr double kInitStd = 0.02;

template <typename T>
Tensor<T> add_weight(ParamSet<T>& ps, const std::string& name, numcore::Shape shape, std::mt19937_64& rng) {
  return ps.add(name, numcore::truncated_normal<T>(std::move(shape), T(kInitStd), rng));
}

template <typename T>
Tensor<T> add_zeros(ParamSet<T>& ps, const std::string& name, numcore::Shape shape) {
  return ps.add(name, Tensor<T>::zeros(std::move(shape)));
}

template <typename T>
Tensor<T> add_ones(ParamSet<T>& ps, const std::string& name, numcore::Shape shape) {
  return ps.add(name, Tensor<T>::filled(std::move(shape), T(1)));
}

template <typename T>
struct LayerNormParams {
  Tensor<T> gain, bias;

  static LayerNormParams make(ParamSet<T>& ps, const std::string& prefix, std::size_t dim) {
    return {add_ones(ps, prefix + ".gain", {dim}), add_zeros(ps, prefix + ".bias", {dim})};
  }
  Tensor<T> operator()(const Tensor<T>& x) const { return numcore::layer_norm(x, gain, bias); }
};

template <typename T>
struct LinearParams {
  Tensor<T> weight, bias;  // weight [in, out]

  static LinearParams make(ParamSet<T>& ps, const std::string& prefix, std::size_t in, std::size_t out,
                           std::mt19937_64& rng) {
    return {add_weight(ps, prefix + ".weight", {in, out}, rng), add_zeros(ps, prefix + ".bias", {out})};
  }
  Tensor<T> operator()(const Tensor<T>& x) const { return numcore::linear(x, weight, bias); }
};

template <typename T>
struct BlockOutput {
  Tensor<T> x;
  Tensor<T> attention;  // [heads, n, n], detached
};

/// Pre-norm transformer block: x + attn(ln1(x)), then + mlp(ln2(.)).
template <typename T>
struct TransformerBlock {
  LayerNormParams<T> ln1, ln2;
  LinearParams<T> q, k, v, proj, fc1, fc2;
  std::size_t heads = 1;
  bool causal = false;

  static TransformerBlock make(ParamSet<T>& ps, const std::string& prefix, std::size_t dim, std::size_t heads,
                               double mlp_ratio, bool causal, std::mt19937_64& rng) {
    const auto hidden = static_cast<std::size_t>(static_cast<double>(dim) * mlp_ratio);
    TransformerBlock b;
    b.ln1 = LayerNormParams<T>::make(ps, prefix + ".ln1", dim);
    b.q = LinearParams<T>::make(ps, prefix + ".attn.q", dim, dim, rng);
    b.k = LinearParams<T>::make(ps, prefix + ".attn.k", dim, dim, rng);
    b.v = LinearParams<T>::make(ps, prefix + ".attn.v", dim, dim, rng);
    b.proj = LinearParams<T>::make(ps, prefix + ".attn.proj", dim, dim, rng);
    b.ln2 = LayerNormParams<T>::make(ps, prefix + ".ln2", dim);
    b.fc1 = LinearParams<T>::make(ps, prefix + ".mlp.fc1", dim, hidden, rng);
    b.fc2 = LinearParams<T>::make(ps, prefix + ".mlp.fc2", hidden, dim, rng);
    b.heads = heads;
    b.causal = causal;
    return b;
  }

  BlockOutput<T> operator()(const Tensor<T>& x) const {
    const auto h = ln1(x);
    auto att = numcore::scaled_dot_product_attention(q(h), k(h), v(h), heads, causal);
    auto y = numcore::add(x, proj(att.output));
    y = numcore::add(y, fc2(numcore::gelu(fc1(ln2(y)))));
    return {y, att.weights};
  }
};

}  // namespace skycast::model
