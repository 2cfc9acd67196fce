// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The skycast Authors
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <unordered_map>
#include <vector>

#include "skycast/numcore/params.hpp"

namespace skycast::numcore {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 1e-6;
};

/// Adam moments per parameter name. Each parameter keeps its own step count
/// so tensors that join training late (an unfrozen encoder) start with fresh
/// bias correction.
template <typename T>
struct AdamState {
  struct Moments {
    std::uint64_t step = 0;
    std::vector<T> m, v;
  };

  explicit AdamState(AdamConfig cfg = {}) : config(cfg) {
    if (cfg.beta1 < 0 || cfg.beta1 >= 1 || cfg.beta2 < 0 || cfg.beta2 >= 1)
      throw ConfigError("adam: betas must lie in [0, 1)");
    if (cfg.eps <= 0) throw ConfigError("adam: eps must be positive");
    if (cfg.weight_decay < 0) throw ConfigError("adam: weight decay must be non-negative");
  }

  AdamConfig config;
  std::uint64_t step = 0;
  std::unordered_map<std::string, Moments> moments;
};

/// One bias-corrected Adam update with decoupled weight decay on every
/// unfrozen parameter that has a gradient.
template <typename T>
void adam_step(ParamSet<T>& params, AdamState<T>& state, double lr) {
  if (!(lr > 0)) throw ContractError("adam_step: learning rate must be positive");
  for (auto& p : params.items()) {
    if (p.frozen || !p.tensor.has_grad()) continue;
    auto grad = p.tensor.grad();
    for (std::size_t i = 0; i < grad.size(); ++i)
      if (!std::isfinite(grad[i]))
        throw NumericError("adam_step: non-finite gradient in '" + p.name + "' at index " + std::to_string(i) +
                           " (step " + std::to_string(state.step) + ")");
  }
  ++state.step;
  const auto& c = state.config;
  for (auto& p : params.items()) {
    if (p.frozen || !p.tensor.has_grad()) continue;
    auto& mom = state.moments[p.name];
    auto values = p.tensor.mutable_data();
    auto grad = p.tensor.grad();
    if (mom.m.size() != values.size()) {
      mom.m.assign(values.size(), T(0));
      mom.v.assign(values.size(), T(0));
    }
    ++mom.step;
    const double bc1 = 1.0 - std::pow(c.beta1, static_cast<double>(mom.step));
    const double bc2 = 1.0 - std::pow(c.beta2, static_cast<double>(mom.step));
    const T decay = static_cast<T>(1.0 - lr * c.weight_decay);
    const T b1 = static_cast<T>(c.beta1), b2 = static_cast<T>(c.beta2);
    for (std::size_t i = 0; i < values.size(); ++i) {
      const T g = grad[i];
      mom.m[i] = b1 * mom.m[i] + (T(1) - b1) * g;
      mom.v[i] = b2 * mom.v[i] + (T(1) - b2) * g * g;
      const double mhat = static_cast<double>(mom.m[i]) / bc1;
      const double vhat = static_cast<double>(mom.v[i]) / bc2;
      values[i] = values[i] * decay - static_cast<T>(lr * mhat / (std::sqrt(vhat) + c.eps));
    }
  }
}

enum class ScheduleKind { cosine_anneal, exp_warmup_then_cosine };

struct LrSchedule {
  ScheduleKind kind = ScheduleKind::cosine_anneal;
  double base_lr = 1e-4;
  double min_lr = 0.0;
  std::uint64_t warmup_steps = 0;
  std::uint64_t total_steps = 1;
  // The exponential ramp starts at base_lr * warmup_start_factor.
  double warmup_start_factor = 0.01;

  void validate() const {
    if (min_lr < 0 || min_lr > base_lr) throw ConfigError("schedule: need 0 <= min_lr <= base_lr");
    if (total_steps == 0) throw ConfigError("schedule: total_steps must be positive");
    if (warmup_steps >= total_steps) throw ConfigError("schedule: warmup_steps must be below total_steps");
    if (!(warmup_start_factor > 0 && warmup_start_factor <= 1))
      throw ConfigError("schedule: warmup_start_factor must lie in (0, 1]");
  }
};

/// Warmup covers `warmup_fraction` of the run, rounded down.
inline LrSchedule make_schedule(ScheduleKind kind, double base_lr, std::uint64_t total_steps,
                                double warmup_fraction = 0.05, double min_lr = 0.0) {
  LrSchedule s;
  s.kind = kind;
  s.base_lr = base_lr;
  s.min_lr = min_lr;
  s.total_steps = std::max<std::uint64_t>(total_steps, 1);
  if (kind == ScheduleKind::exp_warmup_then_cosine)
    s.warmup_steps = std::min<std::uint64_t>(static_cast<std::uint64_t>(warmup_fraction * static_cast<double>(s.total_steps)),
                                             s.total_steps - 1);
  s.validate();
  return s;
}

inline double schedule_lr(const LrSchedule& s, std::uint64_t step) {
  if (step > s.total_steps) return s.min_lr;
  auto cosine = [&](double progress) {
    return s.min_lr + (s.base_lr - s.min_lr) * 0.5 * (1.0 + std::cos(std::numbers::pi * progress));
  };
  if (s.kind == ScheduleKind::cosine_anneal)
    return cosine(static_cast<double>(step) / static_cast<double>(s.total_steps));
  if (step < s.warmup_steps) {
    const double frac = static_cast<double>(step) / static_cast<double>(s.warmup_steps);
    return s.base_lr * std::pow(s.warmup_start_factor, 1.0 - frac);
  }
  return cosine(static_cast<double>(step - s.warmup_steps) / static_cast<double>(s.total_steps - s.warmup_steps));
}

}  // namespace skycast::numcore
