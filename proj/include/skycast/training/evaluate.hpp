// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The skycast Authors
#pragma once

#include <string>
#include <vector>

#include "skycast/clearsky/persistence.hpp"
#include "skycast/metrics/metrics.hpp"
#include "skycast/training/forecaster.hpp"
#include "skycast/training/frames.hpp"

namespace skycast::training {

enum class Reference { smart_persistence, backbone_persistence };

inline Reference parse_reference(const std::string& s) {
  if (s == "smart" || s == "smart_persistence") return Reference::smart_persistence;
  if (s == "backbone" || s == "backbone_persistence") return Reference::backbone_persistence;
  throw ConfigError("unknown reference '" + s + "' (expected smart or backbone)");
}

inline const char* reference_name(Reference r) {
  return r == Reference::smart_persistence ? "smart_persistence" : "backbone_persistence";
}

/// Encodings of every frame, [n, D], without augmentation or gradients.
template <typename T>
Tensor<T> encode_frames(const model::Forecaster<T>& m, const FrameSet& fs) {
  numcore::NoGradGuard ng;
  const std::size_t d = m.backbone_config().embed_dim;
  std::vector<T> rows;
  rows.reserve(fs.size() * d);
  for (const auto& imgs : fs.images) {
    const auto z = m.encode(imgs).z;
    rows.insert(rows.end(), z.data().begin(), z.data().end());
  }
  return Tensor<T>({fs.size(), d}, std::move(rows));
}

/// Rows `idx` of a constant [n, D] matrix.
template <typename T>
Tensor<T> take_rows(const Tensor<T>& m, const std::vector<std::size_t>& idx, std::size_t from, std::size_t count) {
  const std::size_t d = m.dim(1);
  std::vector<T> out(count * d);
  const auto src = m.data();
  for (std::size_t r = 0; r < count; ++r)
    std::copy_n(src.begin() + static_cast<std::ptrdiff_t>(idx[from + r] * d), d, out.begin() + static_cast<std::ptrdiff_t>(r * d));
  return Tensor<T>({count, d}, std::move(out));
}

/// Normalized stage-1 regression output for every frame.
template <typename T>
std::vector<double> regress_frames(const model::Forecaster<T>& m, const FrameSet& fs) {
  numcore::NoGradGuard ng;
  std::vector<double> out;
  out.reserve(fs.size());
  for (const auto& imgs : fs.images) out.push_back(static_cast<double>(m.regress(imgs).item()));
  return out;
}

/// Denormalized forecasts of `m` and of the reference over every sequence
/// of `seqs`. Backbone persistence needs the stage-1 model in `bp_model`.
template <typename T>
metrics::PredictionSet predict(const model::Forecaster<T>& m, const FrameSet& fs,
                               const std::vector<data::SequenceSample>& seqs, const data::NormStats& stats,
                               Reference ref, const clearsky::ClearSkyFn& clear_sky,
                               const model::Forecaster<T>* bp_model = nullptr) {
  if (seqs.empty()) throw ContractError("evaluate: split has no valid sequences");
  const std::size_t k = seqs.front().horizon;
  if (ref == Reference::backbone_persistence && !bp_model)
    throw ContractError("evaluate: backbone persistence needs the stage-1 model");
  if (ref == Reference::smart_persistence && !clear_sky) throw ContractError("evaluate: smart persistence needs a clear-sky model");

  const auto enc = encode_frames(m, fs);
  std::vector<double> bp;
  if (ref == Reference::backbone_persistence) bp = regress_frames(*bp_model, fs);

  numcore::NoGradGuard ng;
  metrics::PredictionSet p;
  p.horizon = k;
  for (const auto& seq : seqs) {
    if (seq.horizon != k) throw ContractError("evaluate: mixed horizons");
    const std::size_t s = seq.context;
    const auto bundle = model::unroll(m.decoder(), m.irradiance_head(), take_rows(enc, seq.members, 0, s), k);
    const std::size_t last = seq.members[s - 1];
    const auto& last_sample = fs.samples[last];
    const double clear_t = ref == Reference::smart_persistence ? clear_sky(last_sample.timestamp) : 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      const auto& target = fs.samples[seq.members[s + j]];
      p.target_time.push_back(target.timestamp);
      p.truth.push_back(target.irradiance_wm2);
      p.model.push_back(stats.denormalize(static_cast<double>(bundle.forecasts[j].item())));
      if (ref == Reference::smart_persistence)
        p.reference.push_back(clearsky::smart_persistence(last_sample.irradiance_wm2, clear_t, clear_sky(target.timestamp)));
      else
        p.reference.push_back(stats.denormalize(bp[last]));
    }
  }
  return p;
}

template <typename T>
metrics::EvalReport evaluate(const model::Forecaster<T>& m, const FrameSet& fs,
                             const std::vector<data::SequenceSample>& seqs, const data::NormStats& stats,
                             Reference ref, const clearsky::ClearSkyFn& clear_sky,
                             const model::Forecaster<T>* bp_model = nullptr, metrics::PredictionSet* keep = nullptr) {
  auto p = predict(m, fs, seqs, stats, ref, clear_sky, bp_model);
  auto r = metrics::evaluate(p, stats.mean_wm2, "model", reference_name(ref));
  if (keep) *keep = std::move(p);
  return r;
}

/// Stage-1 regression quality on single frames (denormalized).
template <typename T>
metrics::ErrorMetrics evaluate_regression(const model::Forecaster<T>& m, const FrameSet& fs,
                                          const data::NormStats& stats) {
  const auto z = regress_frames(m, fs);
  std::vector<double> y, y_hat;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    y.push_back(fs.samples[i].irradiance_wm2);
    y_hat.push_back(stats.denormalize(z[i]));
  }
  return metrics::error_metrics(y, y_hat, stats.mean_wm2);
}

}  // namespace skycast::training
