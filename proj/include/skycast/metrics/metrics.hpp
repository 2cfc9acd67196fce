// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The skycast Authors
#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "skycast/dataset/time.hpp"
#include "skycast/numcore/errors.hpp"

namespace skycast::metrics {

struct ErrorMetrics {
  double mae = 0, rmse = 0, nrmse_pct = 0;
};

/// MAE, RMSE and RMSE as a percentage of the training-set mean irradiance.
inline ErrorMetrics error_metrics(const std::vector<double>& y, const std::vector<double>& y_hat, double train_mean) {
  if (y.empty()) throw ContractError("error_metrics: empty input");
  if (y.size() != y_hat.size()) throw ContractError("error_metrics: length mismatch");
  if (!(train_mean > 0)) throw ContractError("error_metrics: train mean must be positive");
  double ae = 0, se = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double d = y_hat[i] - y[i];
    ae += std::abs(d);
    se += d * d;
  }
  const double n = static_cast<double>(y.size());
  ErrorMetrics m;
  m.mae = ae / n;
  m.rmse = std::sqrt(se / n);
  m.nrmse_pct = 100.0 * m.rmse / train_mean;
  return m;
}

/// Percent improvement of the model RMSE over the reference RMSE.
inline double forecast_skill(double rmse_model, double rmse_reference) {
  if (!(rmse_reference > 0)) throw ContractError("forecast_skill: reference RMSE must be positive");
  return 100.0 * (1.0 - rmse_model / rmse_reference);
}

/// Forecasts for n sequences and k horizon steps, row-major [n][k], in W/m^2.
struct PredictionSet {
  std::size_t horizon = 0;
  std::vector<data::Timestamp> target_time;  // n*k
  std::vector<double> truth, model, reference;
};

struct HorizonMetrics {
  std::size_t step = 0;
  double mae_wm2 = 0, rmse_wm2 = 0, nrmse_pct = 0, fs_pct = 0;
  double reference_mae_wm2 = 0, reference_rmse_wm2 = 0;
  std::string reference_name;
};

struct DaySkill {
  std::string date;  // YYYY-MM-DD of the target time
  std::size_t count = 0;
  double rmse_wm2 = 0, reference_rmse_wm2 = 0, fs_pct = 0;
};

struct EvalReport {
  std::string model_name;
  std::string reference_name;
  std::size_t sample_count = 0;
  double train_mean_wm2 = 0;
  std::vector<HorizonMetrics> horizons;
  std::vector<DaySkill> per_day;  // final horizon step

  const HorizonMetrics& final_step() const { return horizons.back(); }
};

inline std::string date_of(data::Timestamp t) { return data::format_timestamp(t).substr(0, 10); }

/// Metrics per horizon step on the shared sample set, plus per-day skill of
/// the final step (days whose reference RMSE is zero are skipped).
inline EvalReport evaluate(const PredictionSet& p, double train_mean, const std::string& model_name,
                           const std::string& reference_name) {
  const std::size_t k = p.horizon;
  if (k == 0 || p.truth.empty()) throw ContractError("evaluate: no valid sequences");
  if (p.truth.size() % k != 0 || p.model.size() != p.truth.size() || p.reference.size() != p.truth.size() ||
      p.target_time.size() != p.truth.size())
    throw ContractError("evaluate: prediction set arrays disagree");
  const std::size_t n = p.truth.size() / k;
  EvalReport r;
  r.model_name = model_name;
  r.reference_name = reference_name;
  r.sample_count = n;
  r.train_mean_wm2 = train_mean;
  for (std::size_t j = 0; j < k; ++j) {
    std::vector<double> y(n), m(n), ref(n);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = p.truth[i * k + j];
      m[i] = p.model[i * k + j];
      ref[i] = p.reference[i * k + j];
    }
    const auto em = error_metrics(y, m, train_mean);
    const auto er = error_metrics(y, ref, train_mean);
    HorizonMetrics h;
    h.step = j + 1;
    h.mae_wm2 = em.mae;
    h.rmse_wm2 = em.rmse;
    h.nrmse_pct = em.nrmse_pct;
    h.reference_mae_wm2 = er.mae;
    h.reference_rmse_wm2 = er.rmse;
    h.fs_pct = er.rmse > 0 ? forecast_skill(em.rmse, er.rmse) : (em.rmse > 0 ? -INFINITY : 0.0);
    h.reference_name = reference_name;
    r.horizons.push_back(h);
  }
  std::map<std::string, std::vector<std::size_t>> days;
  for (std::size_t i = 0; i < n; ++i) days[date_of(p.target_time[i * k + k - 1])].push_back(i * k + k - 1);
  for (const auto& [date, idx] : days) {
    double se_m = 0, se_r = 0;
    for (auto i : idx) {
      se_m += (p.model[i] - p.truth[i]) * (p.model[i] - p.truth[i]);
      se_r += (p.reference[i] - p.truth[i]) * (p.reference[i] - p.truth[i]);
    }
    DaySkill d;
    d.date = date;
    d.count = idx.size();
    d.rmse_wm2 = std::sqrt(se_m / static_cast<double>(idx.size()));
    d.reference_rmse_wm2 = std::sqrt(se_r / static_cast<double>(idx.size()));
    if (!(d.reference_rmse_wm2 > 0)) continue;
    d.fs_pct = forecast_skill(d.rmse_wm2, d.reference_rmse_wm2);
    r.per_day.push_back(d);
  }
  return r;
}

/// counts[y_bin * bins + y_hat_bin] over [0, max] on both axes; values at
/// or beyond max land in the last bin, negatives in the first.
struct Histogram2D {
  std::size_t bins = 0;
  double max_value = 0;
  std::vector<std::size_t> counts;

  std::size_t at(std::size_t y_bin, std::size_t y_hat_bin) const { return counts[y_bin * bins + y_hat_bin]; }
  std::size_t total() const {
    std::size_t t = 0;
    for (auto c : counts) t += c;
    return t;
  }
};

inline Histogram2D density_export(const std::vector<double>& y, const std::vector<double>& y_hat, std::size_t bins,
                                  double max_value = 0) {
  if (y.size() != y_hat.size()) throw ContractError("density_export: length mismatch");
  if (bins == 0) throw ContractError("density_export: bins must be >= 1");
  if (max_value <= 0) {
    for (std::size_t i = 0; i < y.size(); ++i) max_value = std::max({max_value, y[i], y_hat[i]});
    if (max_value <= 0) max_value = 1;
  }
  Histogram2D h{bins, max_value, std::vector<std::size_t>(bins * bins, 0)};
  auto bin = [&](double v) {
    if (!(v > 0)) return std::size_t{0};
    return std::min(bins - 1, static_cast<std::size_t>(v / max_value * static_cast<double>(bins)));
  };
  for (std::size_t i = 0; i < y.size(); ++i) ++h.counts[bin(y[i]) * bins + bin(y_hat[i])];
  return h;
}

}  // namespace skycast::metrics
