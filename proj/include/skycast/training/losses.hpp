// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The skycast Authors
#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "skycast/decoder.hpp"
#include "skycast/json_util.hpp"

namespace skycast::training {

using numcore::Tensor;

struct LossWeights {
  double alpha = 1.0;  // final irradiance
  double beta = 1.0;   // intermediate irradiance
  double gamma = 1.0;  // encodings

  void validate() const {
    if (alpha < 0 || beta < 0 || gamma < 0) throw ConfigError("loss weights must be >= 0");
    if (alpha == 0 && beta == 0 && gamma == 0) throw ConfigError("loss weights must not all be zero");
  }
};

enum class IrradianceLoss { mse, mae };

inline IrradianceLoss parse_irradiance_loss(const std::string& s) {
  if (s == "mse") return IrradianceLoss::mse;
  if (s == "mae") return IrradianceLoss::mae;
  throw ConfigError("unknown irradiance loss '" + s + "' (expected mse or mae)");
}

inline const char* irradiance_loss_name(IrradianceLoss l) { return l == IrradianceLoss::mse ? "mse" : "mae"; }

template <typename T>
Tensor<T> loss_irr(const Tensor<T>& pred, const Tensor<T>& target, IrradianceLoss kind = IrradianceLoss::mse) {
  if (pred.numel() != target.numel())
    throw ContractError("loss_irr: " + std::to_string(pred.numel()) + " predictions vs " +
                        std::to_string(target.numel()) + " targets");
  const auto t = numcore::reshape(target.detach(), pred.shape());
  return kind == IrradianceLoss::mse ? numcore::mse_loss(pred, t) : numcore::mae_loss(pred, t);
}

/// Mean squared error over every component; the target side is a constant.
template <typename T>
Tensor<T> loss_enc(const Tensor<T>& z_true, const Tensor<T>& z_hat) {
  if (z_true.shape() != z_hat.shape())
    throw ContractError("loss_enc: shapes " + numcore::shape_str(z_true.shape()) + " and " +
                        numcore::shape_str(z_hat.shape()) + " differ");
  return numcore::mse_loss(z_hat, z_true.detach());
}

/// alpha * final + beta * intermediate + gamma * encoding. Terms with zero
/// weight or an undefined tensor are left out of the graph.
template <typename T>
Tensor<T> total_loss(const Tensor<T>& l_final, const Tensor<T>& l_intermediate, const Tensor<T>& l_enc,
                     const LossWeights& w) {
  w.validate();
  std::vector<Tensor<T>> terms;
  auto push = [&](const Tensor<T>& t, double weight) {
    if (weight != 0 && t.defined()) terms.push_back(numcore::scale(t, static_cast<T>(weight)));
  };
  push(l_final, w.alpha);
  push(l_intermediate, w.beta);
  push(l_enc, w.gamma);
  if (terms.empty()) throw ContractError("total_loss: every weighted term is empty");
  return terms.size() == 1 ? terms[0] : numcore::add_n(terms);
}

template <typename T>
struct SequenceLoss {
  Tensor<T> total;
  double final = 0, intermediate = 0, encoding = 0;
};

/// Loss of one unrolled sequence. `y` holds normalized targets of frames
/// 1..s+k; `z_true` holds encodings of frames 2..s+k ([s+k-1, D]).
template <typename T>
SequenceLoss<T> sequence_loss(const model::ForecastBundle<T>& b, const Tensor<T>& z_true, const std::vector<T>& y,
                              const LossWeights& w, IrradianceLoss kind) {
  const std::size_t s = b.in_window_encodings.dim(0), k = b.forecasts.size();
  if (y.size() != s + k) throw ContractError("sequence_loss: expected " + std::to_string(s + k) + " targets");
  SequenceLoss<T> out;

  const Tensor<T> l_final = loss_irr(b.forecasts.back(), Tensor<T>({1, 1}, {y[s + k - 1]}), kind);

  Tensor<T> l_mid;
  if (w.beta != 0 && s + k > 2) {
    std::vector<Tensor<T>> parts;
    if (s > 1) parts.push_back(b.in_window_irradiance);
    for (std::size_t j = 0; j + 1 < k; ++j) parts.push_back(b.forecasts[j]);
    std::vector<T> t(y.begin() + 1, y.begin() + static_cast<std::ptrdiff_t>(s + k - 1));
    l_mid = loss_irr(numcore::concat_rows(parts), Tensor<T>({t.size(), 1}, t), kind);
  }

  Tensor<T> l_enc;
  if (w.gamma != 0) {
    std::vector<Tensor<T>> rows{b.in_window_encodings};
    for (const auto& r : b.unrolled_encodings) rows.push_back(r);
    l_enc = loss_enc(z_true, numcore::concat_rows(rows));
  }

  out.total = total_loss(l_final, l_mid, l_enc, w);
  out.final = static_cast<double>(l_final.item());
  if (l_mid.defined()) out.intermediate = static_cast<double>(l_mid.item());
  if (l_enc.defined()) out.encoding = static_cast<double>(l_enc.item());
  return out;
}

inline nlohmann::json to_json(const LossWeights& w) {
  return {{"alpha", w.alpha}, {"beta", w.beta}, {"gamma", w.gamma}};
}

inline LossWeights loss_weights_from_json(const nlohmann::json& j) {
  check_keys(j, {"alpha", "beta", "gamma"}, "loss_weights");
  LossWeights w;
  read_opt(j, "alpha", w.alpha, "loss_weights");
  read_opt(j, "beta", w.beta, "loss_weights");
  read_opt(j, "gamma", w.gamma, "loss_weights");
  w.validate();
  return w;
}

}  // namespace skycast::training
