// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The skycast Authors
#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "skycast/numcore/ops.hpp"

namespace skycast::numcore {

template <typename T>
struct AttentionResult {
  Tensor<T> output;   // [n, dim]
  Tensor<T> weights;  // [heads, n, m], detached
};

/// Multi-head scaled dot-product attention over q[n,dim], k[m,dim], v[m,dim].
/// Heads take contiguous column blocks of width dim/heads. With
/// `causal` set, query i only sees keys 0..i and n must equal m.
template <typename T>
AttentionResult<T> scaled_dot_product_attention(const Tensor<T>& q, const Tensor<T>& k, const Tensor<T>& v,
                                                std::size_t heads, bool causal) {
  detail::require_rank(q, 2, "attention");
  detail::require_rank(k, 2, "attention");
  detail::require_rank(v, 2, "attention");
  const std::size_t n = q.dim(0), m = k.dim(0), dim = q.dim(1);
  if (heads == 0 || dim % heads != 0)
    throw ConfigError("attention: model dim " + std::to_string(dim) + " not divisible by " +
                      std::to_string(heads) + " heads");
  if (k.dim(1) != dim || v.dim(1) != dim || v.dim(0) != m) throw ShapeError("attention: q/k/v extents disagree");
  if (causal && n != m) throw ShapeError("attention: causal mask needs equal query and key lengths");
  const std::size_t hd = dim / heads;
  const T inv_scale = T(1) / std::sqrt(static_cast<T>(hd));

  std::vector<T> probs(heads * n * m, T(0));
  std::vector<T> out(n * dim, T(0));
  std::vector<T> scores(m);
  for (std::size_t h = 0; h < heads; ++h) {
    const std::size_t col = h * hd;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t visible = causal ? i + 1 : m;
      T mx = -std::numeric_limits<T>::infinity();
      for (std::size_t j = 0; j < visible; ++j) {
        T s = 0;
        for (std::size_t c = 0; c < hd; ++c) s += q[i * dim + col + c] * k[j * dim + col + c];
        scores[j] = s * inv_scale;
        mx = std::max(mx, scores[j]);
      }
      T total = 0;
      for (std::size_t j = 0; j < visible; ++j) {
        scores[j] = std::exp(scores[j] - mx);
        total += scores[j];
      }
      T* prow = probs.data() + (h * n + i) * m;
      for (std::size_t j = 0; j < visible; ++j) prow[j] = scores[j] / total;
      for (std::size_t j = 0; j < visible; ++j) {
        const T p = prow[j];
        for (std::size_t c = 0; c < hd; ++c) out[i * dim + col + c] += p * v[j * dim + col + c];
      }
    }
  }

  Tensor<T> weights({heads, n, m}, probs);
  auto output = Tensor<T>::make_result(
      {n, dim}, std::move(out), {q, k, v},
      [=, probs = std::move(probs)](detail::Node<T>& self) {
        const auto& qv = self.inputs[0]->value;
        const auto& kv = self.inputs[1]->value;
        const auto& vv = self.inputs[2]->value;
        auto* gq = detail::input_grad(self, 0);
        auto* gk = detail::input_grad(self, 1);
        auto* gv = detail::input_grad(self, 2);
        const T* go = self.grad.data();
        std::vector<T> dp(m);
        for (std::size_t h = 0; h < heads; ++h) {
          const std::size_t col = h * hd;
          for (std::size_t i = 0; i < n; ++i) {
            const std::size_t visible = causal ? i + 1 : m;
            const T* prow = probs.data() + (h * n + i) * m;
            T dot = 0;
            for (std::size_t j = 0; j < visible; ++j) {
              T s = 0;
              for (std::size_t c = 0; c < hd; ++c) s += go[i * dim + col + c] * vv[j * dim + col + c];
              dp[j] = s;
              dot += s * prow[j];
              if (gv)
                for (std::size_t c = 0; c < hd; ++c) (*gv)[j * dim + col + c] += prow[j] * go[i * dim + col + c];
            }
            for (std::size_t j = 0; j < visible; ++j) {
              const T ds = prow[j] * (dp[j] - dot) * inv_scale;
              if (gq)
                for (std::size_t c = 0; c < hd; ++c) (*gq)[i * dim + col + c] += ds * kv[j * dim + col + c];
              if (gk)
                for (std::size_t c = 0; c < hd; ++c) (*gk)[j * dim + col + c] += ds * qv[i * dim + col + c];
            }
          }
        }
      });
  return {std::move(output), std::move(weights)};
}

}  // namespace skycast::numcore
