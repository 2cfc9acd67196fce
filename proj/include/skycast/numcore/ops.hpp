// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The skycast Authors
#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "skycast/numcore/kernels.hpp"
#include "skycast/numcore/tensor.hpp"

namespace skycast::numcore {

namespace detail {

// Grad buffer of input `i`, or nullptr when that input takes no gradient.
template <typename T>
std::vector<T>* input_grad(Node<T>& self, std::size_t i) {
  auto& in = *self.inputs[i];
  return in.requires_grad ? &in.ensure_grad() : nullptr;
}

template <typename T>
void require_same_shape(const Tensor<T>& a, const Tensor<T>& b, const char* op) {
  if (a.shape() != b.shape())
    throw ShapeError(std::string(op) + ": shape mismatch " + shape_str(a.shape()) + " vs " +
                     shape_str(b.shape()));
}

template <typename T>
void require_rank(const Tensor<T>& a, std::size_t rank, const char* op) {
  if (a.rank() != rank)
    throw ShapeError(std::string(op) + ": expected rank " + std::to_string(rank) + ", got " +
                     shape_str(a.shape()));
}

}  // namespace detail

template <typename T>
void check_finite(const Tensor<T>& t, const std::string& where) {
  for (std::size_t i = 0; i < t.numel(); ++i)
    if (!std::isfinite(t[i]))
      throw NumericError("non-finite value at index " + std::to_string(i) + " in " + where);
}

template <typename T>
Tensor<T> add(const Tensor<T>& a, const Tensor<T>& b) {
  detail::require_same_shape(a, b, "add");
  std::vector<T> out(a.numel());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] + b[i];
  return Tensor<T>::make_result(a.shape(), std::move(out), {a, b}, [](detail::Node<T>& self) {
    for (std::size_t k = 0; k < 2; ++k)
      if (auto* g = detail::input_grad(self, k))
        for (std::size_t i = 0; i < g->size(); ++i) (*g)[i] += self.grad[i];
  });
}

template <typename T>
Tensor<T> sub(const Tensor<T>& a, const Tensor<T>& b) {
  detail::require_same_shape(a, b, "sub");
  std::vector<T> out(a.numel());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] - b[i];
  return Tensor<T>::make_result(a.shape(), std::move(out), {a, b}, [](detail::Node<T>& self) {
    if (auto* g = detail::input_grad(self, 0))
      for (std::size_t i = 0; i < g->size(); ++i) (*g)[i] += self.grad[i];
    if (auto* g = detail::input_grad(self, 1))
      for (std::size_t i = 0; i < g->size(); ++i) (*g)[i] -= self.grad[i];
  });
}

template <typename T>
Tensor<T> mul(const Tensor<T>& a, const Tensor<T>& b) {
  detail::require_same_shape(a, b, "mul");
  std::vector<T> out(a.numel());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] * b[i];
  return Tensor<T>::make_result(a.shape(), std::move(out), {a, b}, [](detail::Node<T>& self) {
    const auto& av = self.inputs[0]->value;
    const auto& bv = self.inputs[1]->value;
    if (auto* g = detail::input_grad(self, 0))
      for (std::size_t i = 0; i < g->size(); ++i) (*g)[i] += self.grad[i] * bv[i];
    if (auto* g = detail::input_grad(self, 1))
      for (std::size_t i = 0; i < g->size(); ++i) (*g)[i] += self.grad[i] * av[i];
  });
}

template <typename T>
Tensor<T> scale(const Tensor<T>& a, T factor) {
  std::vector<T> out(a.numel());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] * factor;
  return Tensor<T>::make_result(a.shape(), std::move(out), {a}, [factor](detail::Node<T>& self) {
    if (auto* g = detail::input_grad(self, 0))
      for (std::size_t i = 0; i < g->size(); ++i) (*g)[i] += self.grad[i] * factor;
  });
}

template <typename T>
Tensor<T> sum(const Tensor<T>& a) {
  T acc = 0;
  for (auto v : a.data()) acc += v;
  return Tensor<T>::make_result({1}, {acc}, {a}, [](detail::Node<T>& self) {
    if (auto* g = detail::input_grad(self, 0))
      for (auto& v : *g) v += self.grad[0];
  });
}

template <typename T>
Tensor<T> mean(const Tensor<T>& a) {
  return scale(sum(a), T(1) / static_cast<T>(a.numel()));
}

/// Sums a list of equally shaped tensors; order of accumulation is the list order.
template <typename T>
Tensor<T> add_n(const std::vector<Tensor<T>>& terms) {
  if (terms.empty()) throw ContractError("add_n: empty list");
  Tensor<T> acc = terms.front();
  for (std::size_t i = 1; i < terms.size(); ++i) acc = add(acc, terms[i]);
  return acc;
}

template <typename T>
Tensor<T> reshape(const Tensor<T>& a, Shape shape) {
  if (numel_of(shape) != a.numel())
    throw ShapeError("reshape: " + shape_str(a.shape()) + " -> " + shape_str(shape));
  return Tensor<T>::make_result(std::move(shape), a.values(), {a}, [](detail::Node<T>& self) {
    if (auto* g = detail::input_grad(self, 0))
      for (std::size_t i = 0; i < g->size(); ++i) (*g)[i] += self.grad[i];
  });
}

/// out[i] = a[index[i]] (flat indices). Backward scatters.
template <typename T>
Tensor<T> gather(const Tensor<T>& a, std::vector<std::size_t> index, Shape shape) {
  if (numel_of(shape) != index.size()) throw ShapeError("gather: index count does not match shape");
  std::vector<T> out(index.size());
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (index[i] >= a.numel()) throw ShapeError("gather: index out of range");
    out[i] = a[index[i]];
  }
  return Tensor<T>::make_result(std::move(shape), std::move(out), {a},
                                [index = std::move(index)](detail::Node<T>& self) {
                                  if (auto* g = detail::input_grad(self, 0))
                                    for (std::size_t i = 0; i < index.size(); ++i)
                                      (*g)[index[i]] += self.grad[i];
                                });
}

template <typename T>
Tensor<T> matmul(const Tensor<T>& a, const Tensor<T>& b) {
  detail::require_rank(a, 2, "matmul");
  detail::require_rank(b, 2, "matmul");
  const std::size_t m = a.dim(0), k = a.dim(1), n = b.dim(1);
  if (b.dim(0) != k)
    throw ShapeError("matmul: inner extents differ " + shape_str(a.shape()) + " x " + shape_str(b.shape()));
  std::vector<T> out(m * n, T(0));
  kernels::gemm_nn(m, n, k, a.data().data(), b.data().data(), out.data());
  return Tensor<T>::make_result({m, n}, std::move(out), {a, b}, [m, n, k](detail::Node<T>& self) {
    const auto& av = self.inputs[0]->value;
    const auto& bv = self.inputs[1]->value;
    if (auto* g = detail::input_grad(self, 0)) kernels::gemm_nt(m, k, n, self.grad.data(), bv.data(), g->data());
    if (auto* g = detail::input_grad(self, 1)) kernels::gemm_tn(k, n, m, av.data(), self.grad.data(), g->data());
  });
}

/// x[m,in] * w[in,out] + b[out]
template <typename T>
Tensor<T> linear(const Tensor<T>& x, const Tensor<T>& w, const Tensor<T>& b) {
  detail::require_rank(x, 2, "linear");
  detail::require_rank(w, 2, "linear");
  const std::size_t m = x.dim(0), in = x.dim(1), out_dim = w.dim(1);
  if (w.dim(0) != in) throw ShapeError("linear: input width " + std::to_string(in) + " vs weight " + shape_str(w.shape()));
  if (b.numel() != out_dim) throw ShapeError("linear: bias length mismatch");
  std::vector<T> out(m * out_dim);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < out_dim; ++j) out[i * out_dim + j] = b[j];
  kernels::gemm_nn(m, out_dim, in, x.data().data(), w.data().data(), out.data());
  return Tensor<T>::make_result({m, out_dim}, std::move(out), {x, w, b},
                                [m, in, out_dim](detail::Node<T>& self) {
                                  const auto& xv = self.inputs[0]->value;
                                  const auto& wv = self.inputs[1]->value;
                                  const T* gy = self.grad.data();
                                  if (auto* g = detail::input_grad(self, 0))
                                    kernels::gemm_nt(m, in, out_dim, gy, wv.data(), g->data());
                                  if (auto* g = detail::input_grad(self, 1))
                                    kernels::gemm_tn(in, out_dim, m, xv.data(), gy, g->data());
                                  if (auto* g = detail::input_grad(self, 2))
                                    for (std::size_t i = 0; i < m; ++i)
                                      for (std::size_t j = 0; j < out_dim; ++j) (*g)[j] += gy[i * out_dim + j];
                                });
}

/// Exact (erf) GELU.
template <typename T>
Tensor<T> gelu(const Tensor<T>& x) {
  std::vector<T> out(x.numel());
  const T inv_sqrt2 = T(1) / std::sqrt(T(2));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = T(0.5) * x[i] * (T(1) + std::erf(x[i] * inv_sqrt2));
  return Tensor<T>::make_result(x.shape(), std::move(out), {x}, [inv_sqrt2](detail::Node<T>& self) {
    auto* g = detail::input_grad(self, 0);
    if (!g) return;
    const auto& xv = self.inputs[0]->value;
    const T inv_sqrt_2pi = T(1) / std::sqrt(T(2) * std::numbers::pi_v<T>);
    for (std::size_t i = 0; i < g->size(); ++i) {
      const T v = xv[i];
      const T cdf = T(0.5) * (T(1) + std::erf(v * inv_sqrt2));
      const T pdf = inv_sqrt_2pi * std::exp(T(-0.5) * v * v);
      (*g)[i] += self.grad[i] * (cdf + v * pdf);
    }
  });
}

/// Normalizes over the last axis, then applies per-feature gain and bias.
/// Uses the population variance.
template <typename T>
Tensor<T> layer_norm(const Tensor<T>& x, const Tensor<T>& gain, const Tensor<T>& bias, T eps = T(1e-5)) {
  const std::size_t width = x.shape().back();
  if (width == 0) throw ShapeError("layer_norm: zero-length axis");
  if (gain.numel() != width || bias.numel() != width)
    throw ShapeError("layer_norm: gain/bias length must equal " + std::to_string(width));
  const std::size_t rows = x.numel() / width;
  std::vector<T> out(x.numel()), xhat(x.numel()), inv_std(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    const T* xr = x.data().data() + r * width;
    T mu = 0;
    for (std::size_t j = 0; j < width; ++j) mu += xr[j];
    mu /= static_cast<T>(width);
    T var = 0;
    for (std::size_t j = 0; j < width; ++j) var += (xr[j] - mu) * (xr[j] - mu);
    var /= static_cast<T>(width);
    const T is = T(1) / std::sqrt(var + eps);
    inv_std[r] = is;
    for (std::size_t j = 0; j < width; ++j) {
      const T h = (xr[j] - mu) * is;
      xhat[r * width + j] = h;
      out[r * width + j] = h * gain[j] + bias[j];
    }
  }
  return Tensor<T>::make_result(
      x.shape(), std::move(out), {x, gain, bias},
      [rows, width, xhat = std::move(xhat), inv_std = std::move(inv_std)](detail::Node<T>& self) {
        const auto& gv = self.inputs[1]->value;
        const T* gy = self.grad.data();
        if (auto* g = detail::input_grad(self, 0)) {
          std::vector<T> dxhat(width);
          for (std::size_t r = 0; r < rows; ++r) {
            T mean_d = 0, mean_dx = 0;
            for (std::size_t j = 0; j < width; ++j) {
              dxhat[j] = gy[r * width + j] * gv[j];
              mean_d += dxhat[j];
              mean_dx += dxhat[j] * xhat[r * width + j];
            }
            mean_d /= static_cast<T>(width);
            mean_dx /= static_cast<T>(width);
            for (std::size_t j = 0; j < width; ++j)
              (*g)[r * width + j] += inv_std[r] * (dxhat[j] - mean_d - xhat[r * width + j] * mean_dx);
          }
        }
        if (auto* g = detail::input_grad(self, 1))
          for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t j = 0; j < width; ++j) (*g)[j] += gy[r * width + j] * xhat[r * width + j];
        if (auto* g = detail::input_grad(self, 2))
          for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t j = 0; j < width; ++j) (*g)[j] += gy[r * width + j];
      });
}

template <typename T>
Tensor<T> softmax(const Tensor<T>& x, std::size_t axis) {
  if (axis >= x.rank())
    throw ShapeError("softmax: axis " + std::to_string(axis) + " invalid for shape " + shape_str(x.shape()));
  std::size_t outer = 1, inner = 1;
  const std::size_t len = x.dim(axis);
  for (std::size_t i = 0; i < axis; ++i) outer *= x.dim(i);
  for (std::size_t i = axis + 1; i < x.rank(); ++i) inner *= x.dim(i);
  std::vector<T> out(x.numel());
  for (std::size_t o = 0; o < outer; ++o)
    for (std::size_t in = 0; in < inner; ++in) {
      const std::size_t base = o * len * inner + in;
      T mx = x[base];
      for (std::size_t j = 1; j < len; ++j) mx = std::max(mx, x[base + j * inner]);
      T total = 0;
      for (std::size_t j = 0; j < len; ++j) {
        const T e = std::exp(x[base + j * inner] - mx);
        out[base + j * inner] = e;
        total += e;
      }
      for (std::size_t j = 0; j < len; ++j) out[base + j * inner] /= total;
    }
  return Tensor<T>::make_result(x.shape(), out, {x}, [outer, inner, len, y = out](detail::Node<T>& self) {
    auto* g = detail::input_grad(self, 0);
    if (!g) return;
    for (std::size_t o = 0; o < outer; ++o)
      for (std::size_t in = 0; in < inner; ++in) {
        const std::size_t base = o * len * inner + in;
        T dot = 0;
        for (std::size_t j = 0; j < len; ++j) dot += self.grad[base + j * inner] * y[base + j * inner];
        for (std::size_t j = 0; j < len; ++j)
          (*g)[base + j * inner] += y[base + j * inner] * (self.grad[base + j * inner] - dot);
      }
  });
}

/// Stacks 2-D tensors with equal widths along the row axis.
template <typename T>
Tensor<T> concat_rows(const std::vector<Tensor<T>>& parts) {
  if (parts.empty()) throw ContractError("concat_rows: empty list");
  const std::size_t width = parts.front().shape().back();
  std::size_t rows = 0;
  std::vector<T> out;
  std::vector<std::size_t> offsets;
  for (const auto& p : parts) {
    detail::require_rank(p, 2, "concat_rows");
    if (p.dim(1) != width) throw ShapeError("concat_rows: width mismatch");
    offsets.push_back(out.size());
    out.insert(out.end(), p.data().begin(), p.data().end());
    rows += p.dim(0);
  }
  return Tensor<T>::make_result({rows, width}, std::move(out), parts,
                                [offsets = std::move(offsets)](detail::Node<T>& self) {
                                  for (std::size_t k = 0; k < self.inputs.size(); ++k)
                                    if (auto* g = detail::input_grad(self, k))
                                      for (std::size_t i = 0; i < g->size(); ++i)
                                        (*g)[i] += self.grad[offsets[k] + i];
                                });
}

/// Rows [start, start+count) of a 2-D tensor.
template <typename T>
Tensor<T> slice_rows(const Tensor<T>& x, std::size_t start, std::size_t count) {
  detail::require_rank(x, 2, "slice_rows");
  if (count == 0 || start + count > x.dim(0)) throw ShapeError("slice_rows: range out of bounds");
  const std::size_t width = x.dim(1);
  std::vector<T> out(x.data().begin() + static_cast<std::ptrdiff_t>(start * width),
                     x.data().begin() + static_cast<std::ptrdiff_t>((start + count) * width));
  return Tensor<T>::make_result({count, width}, std::move(out), {x}, [start, width](detail::Node<T>& self) {
    if (auto* g = detail::input_grad(self, 0))
      for (std::size_t i = 0; i < self.grad.size(); ++i) (*g)[start * width + i] += self.grad[i];
  });
}

template <typename T>
Tensor<T> mse_loss(const Tensor<T>& pred, const Tensor<T>& target) {
  detail::require_same_shape(pred, target, "mse_loss");
  const std::size_t n = pred.numel();
  T acc = 0;
  for (std::size_t i = 0; i < n; ++i) acc += (pred[i] - target[i]) * (pred[i] - target[i]);
  return Tensor<T>::make_result({1}, {acc / static_cast<T>(n)}, {pred, target}, [n](detail::Node<T>& self) {
    const auto& pv = self.inputs[0]->value;
    const auto& tv = self.inputs[1]->value;
    const T c = T(2) * self.grad[0] / static_cast<T>(n);
    if (auto* g = detail::input_grad(self, 0))
      for (std::size_t i = 0; i < n; ++i) (*g)[i] += c * (pv[i] - tv[i]);
    if (auto* g = detail::input_grad(self, 1))
      for (std::size_t i = 0; i < n; ++i) (*g)[i] -= c * (pv[i] - tv[i]);
  });
}

/// Mean absolute error; the subgradient at zero residual is 0.
template <typename T>
Tensor<T> mae_loss(const Tensor<T>& pred, const Tensor<T>& target) {
  detail::require_same_shape(pred, target, "mae_loss");
  const std::size_t n = pred.numel();
  T acc = 0;
  for (std::size_t i = 0; i < n; ++i) acc += std::abs(pred[i] - target[i]);
  return Tensor<T>::make_result({1}, {acc / static_cast<T>(n)}, {pred, target}, [n](detail::Node<T>& self) {
    const auto& pv = self.inputs[0]->value;
    const auto& tv = self.inputs[1]->value;
    const T c = self.grad[0] / static_cast<T>(n);
    auto sgn = [](T v) { return v > T(0) ? T(1) : (v < T(0) ? T(-1) : T(0)); };
    if (auto* g = detail::input_grad(self, 0))
      for (std::size_t i = 0; i < n; ++i) (*g)[i] += c * sgn(pv[i] - tv[i]);
    if (auto* g = detail::input_grad(self, 1))
      for (std::size_t i = 0; i < n; ++i) (*g)[i] -= c * sgn(pv[i] - tv[i]);
  });
}

/// Same-padded 2-D convolution with stride 1 on height x width x channel
/// input. Weight layout is [out, in, k, k]; k must be odd.
template <typename T>
Tensor<T> conv2d_same(const Tensor<T>& x, const Tensor<T>& w, const Tensor<T>& b) {
  detail::require_rank(x, 3, "conv2d_same");
  detail::require_rank(w, 4, "conv2d_same");
  const std::size_t h = x.dim(0), wd = x.dim(1), cin = x.dim(2);
  const std::size_t cout = w.dim(0), ks = w.dim(2);
  if (w.dim(1) != cin) throw ShapeError("conv2d_same: input channels " + std::to_string(cin) + " vs weight " + shape_str(w.shape()));
  if (w.dim(3) != ks || ks % 2 == 0) throw ShapeError("conv2d_same: kernel must be square and odd");
  if (b.numel() != cout) throw ShapeError("conv2d_same: bias length mismatch");
  const long pad = static_cast<long>(ks / 2);
  auto widx = [=](std::size_t o, std::size_t c, std::size_t ky, std::size_t kx) {
    return ((o * cin + c) * ks + ky) * ks + kx;
  };
  std::vector<T> out(h * wd * cout);
  for (std::size_t y = 0; y < h; ++y)
    for (std::size_t xx = 0; xx < wd; ++xx)
      for (std::size_t o = 0; o < cout; ++o) {
        T acc = b[o];
        for (std::size_t ky = 0; ky < ks; ++ky) {
          const long sy = static_cast<long>(y) + static_cast<long>(ky) - pad;
          if (sy < 0 || sy >= static_cast<long>(h)) continue;
          for (std::size_t kx = 0; kx < ks; ++kx) {
            const long sx = static_cast<long>(xx) + static_cast<long>(kx) - pad;
            if (sx < 0 || sx >= static_cast<long>(wd)) continue;
            const std::size_t base = (static_cast<std::size_t>(sy) * wd + static_cast<std::size_t>(sx)) * cin;
            for (std::size_t c = 0; c < cin; ++c) acc += x[base + c] * w[widx(o, c, ky, kx)];
          }
        }
        out[(y * wd + xx) * cout + o] = acc;
      }
  return Tensor<T>::make_result({h, wd, cout}, std::move(out), {x, w, b}, [=](detail::Node<T>& self) {
    const auto& xv = self.inputs[0]->value;
    const auto& wv = self.inputs[1]->value;
    auto* gx = detail::input_grad(self, 0);
    auto* gw = detail::input_grad(self, 1);
    auto* gb = detail::input_grad(self, 2);
    for (std::size_t y = 0; y < h; ++y)
      for (std::size_t xx = 0; xx < wd; ++xx)
        for (std::size_t o = 0; o < cout; ++o) {
          const T go = self.grad[(y * wd + xx) * cout + o];
          if (gb) (*gb)[o] += go;
          for (std::size_t ky = 0; ky < ks; ++ky) {
            const long sy = static_cast<long>(y) + static_cast<long>(ky) - pad;
            if (sy < 0 || sy >= static_cast<long>(h)) continue;
            for (std::size_t kx = 0; kx < ks; ++kx) {
              const long sx = static_cast<long>(xx) + static_cast<long>(kx) - pad;
              if (sx < 0 || sx >= static_cast<long>(wd)) continue;
              const std::size_t base = (static_cast<std::size_t>(sy) * wd + static_cast<std::size_t>(sx)) * cin;
              for (std::size_t c = 0; c < cin; ++c) {
                if (gx) (*gx)[base + c] += go * wv[widx(o, c, ky, kx)];
                if (gw) (*gw)[widx(o, c, ky, kx)] += go * xv[base + c];
              }
            }
          }
        }
  });
}

}  // namespace skycast::numcore
