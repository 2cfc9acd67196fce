// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The skycast Authors
#pragma once

#include <cstdint>
#include <cstring>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "skycast/numcore/tensor.hpp"

namespace skycast::numcore {

template <typename T>
struct Parameter {
  std::string name;
  Tensor<T> tensor;
  bool frozen = false;
};

/// Ordered, named collection of learnable tensors. Registration order is the
/// iteration order everywhere (optimizer, checkpoints, hashing).
template <typename T>
class ParamSet {
 public:
  Tensor<T> add(std::string name, Tensor<T> tensor) {
    for (const auto& p : items_)
      if (p.name == name) throw ContractError("duplicate parameter name " + name);
    tensor.set_requires_grad(true);
    items_.push_back({std::move(name), tensor, false});
    return tensor;
  }

  std::vector<Parameter<T>>& items() { return items_; }
  const std::vector<Parameter<T>>& items() const { return items_; }
  std::size_t size() const { return items_.size(); }

  const Parameter<T>* find(std::string_view name) const {
    for (const auto& p : items_)
      if (p.name == name) return &p;
    return nullptr;
  }
  Parameter<T>* find(std::string_view name) {
    for (auto& p : items_)
      if (p.name == name) return &p;
    return nullptr;
  }

  /// Frozen tensors stop recording gradients and are skipped by the optimizer.
  void set_frozen(std::string_view prefix, bool frozen) {
    for (auto& p : items_)
      if (std::string_view(p.name).starts_with(prefix)) {
        p.frozen = frozen;
        p.tensor.set_requires_grad(!frozen);
      }
  }

  void zero_grad() {
    for (auto& p : items_) p.tensor.zero_grad();
  }

  std::size_t scalar_count() const {
    std::size_t n = 0;
    for (const auto& p : items_) n += p.tensor.numel();
    return n;
  }

  /// FNV-1a over names and raw value bytes of parameters matching `prefix`.
  std::uint64_t digest(std::string_view prefix = "") const {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](const void* data, std::size_t len) {
      const auto* bytes = static_cast<const unsigned char*>(data);
      for (std::size_t i = 0; i < len; ++i) {
        h ^= bytes[i];
        h *= 1099511628211ULL;
      }
    };
    for (const auto& p : items_) {
      if (!std::string_view(p.name).starts_with(prefix)) continue;
      mix(p.name.data(), p.name.size());
      mix(p.tensor.data().data(), p.tensor.numel() * sizeof(T));
    }
    return h;
  }

 private:
  std::vector<Parameter<T>> items_;
};

/// Normal(0, std) samples redrawn until they fall within two standard deviations.
template <typename T>
Tensor<T> truncated_normal(Shape shape, T stddev, std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  std::vector<T> values(numel_of(shape));
  for (auto& v : values) {
    double s = 0;
    do {
      s = dist(rng);
    } while (s < -2.0 || s > 2.0);
    v = static_cast<T>(s * static_cast<double>(stddev));
  }
  return Tensor<T>(std::move(shape), std::move(values));
}

}  // namespace skycast::numcore
