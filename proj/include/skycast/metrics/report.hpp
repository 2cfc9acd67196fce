// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The skycast Authors
#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "skycast/metrics/metrics.hpp"

namespace skycast::metrics {

namespace detail {
inline std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw InputError("cannot write " + path.string());
  return f;
}

inline std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}
}  // namespace detail

inline nlohmann::json to_json(const EvalReport& r) {
  nlohmann::json h = nlohmann::json::array();
  for (const auto& s : r.horizons)
    h.push_back({{"step", s.step},
                 {"mae_wm2", s.mae_wm2},
                 {"rmse_wm2", s.rmse_wm2},
                 {"nrmse_pct", s.nrmse_pct},
                 {"fs_pct", s.fs_pct},
                 {"reference_name", s.reference_name},
                 {"reference_mae_wm2", s.reference_mae_wm2},
                 {"reference_rmse_wm2", s.reference_rmse_wm2}});
  nlohmann::json d = nlohmann::json::array();
  for (const auto& s : r.per_day)
    d.push_back({{"date", s.date},
                 {"count", s.count},
                 {"rmse_wm2", s.rmse_wm2},
                 {"reference_rmse_wm2", s.reference_rmse_wm2},
                 {"fs_pct", s.fs_pct}});
  return {{"model", r.model_name},
          {"reference", r.reference_name},
          {"sample_count", r.sample_count},
          {"train_mean_wm2", r.train_mean_wm2},
          {"mae_scope", "per horizon step; the final step is the multi-step headline"},
          {"horizons", h},
          {"per_day_final_step", d}};
}

inline void write_report_json(const EvalReport& r, const std::filesystem::path& path) {
  auto f = detail::open_out(path);
  f << to_json(r).dump(2) << '\n';
}

inline void write_report_csv(const EvalReport& r, const std::filesystem::path& path) {
  auto f = detail::open_out(path);
  f << "step,mae_wm2,rmse_wm2,nrmse_pct,fs_pct,reference,reference_mae_wm2,reference_rmse_wm2,sample_count\n";
  for (const auto& s : r.horizons)
    f << s.step << ',' << detail::fmt(s.mae_wm2) << ',' << detail::fmt(s.rmse_wm2) << ',' << detail::fmt(s.nrmse_pct)
      << ',' << detail::fmt(s.fs_pct) << ',' << s.reference_name << ',' << detail::fmt(s.reference_mae_wm2) << ','
      << detail::fmt(s.reference_rmse_wm2) << ',' << r.sample_count << '\n';
}

inline void write_per_day_csv(const EvalReport& r, const std::filesystem::path& path) {
  auto f = detail::open_out(path);
  f << "date,count,rmse_wm2,reference_rmse_wm2,fs_pct\n";
  for (const auto& d : r.per_day)
    f << d.date << ',' << d.count << ',' << detail::fmt(d.rmse_wm2) << ',' << detail::fmt(d.reference_rmse_wm2) << ','
      << detail::fmt(d.fs_pct) << '\n';
}

/// One row per sequence and step: target time, truth, model, reference.
inline void write_predictions_csv(const PredictionSet& p, const std::filesystem::path& path) {
  auto f = detail::open_out(path);
  f << "target_time,step,truth_wm2,model_wm2,reference_wm2\n";
  for (std::size_t i = 0; i < p.truth.size(); ++i)
    f << data::format_timestamp(p.target_time[i]) << ',' << (i % p.horizon) + 1 << ',' << detail::fmt(p.truth[i])
      << ',' << detail::fmt(p.model[i]) << ',' << detail::fmt(p.reference[i]) << '\n';
}

/// Rows are ground-truth bins, columns predicted bins; first row and column
/// hold bin lower edges.
inline void write_histogram_csv(const Histogram2D& h, const std::filesystem::path& path) {
  auto f = detail::open_out(path);
  const double w = h.max_value / static_cast<double>(h.bins);
  f << "truth\\pred";
  for (std::size_t j = 0; j < h.bins; ++j) f << ',' << detail::fmt(w * static_cast<double>(j), 2);
  f << '\n';
  for (std::size_t i = 0; i < h.bins; ++i) {
    f << detail::fmt(w * static_cast<double>(i), 2);
    for (std::size_t j = 0; j < h.bins; ++j) f << ',' << h.at(i, j);
    f << '\n';
  }
}

}  // namespace skycast::metrics
