// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The skycast Authors
#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <vector>

#include <json.hpp>

#include "skycast/dataset/sample.hpp"

namespace skycast::data {

/// Target standardization; std uses the population (1/n) convention.
struct NormStats {
  double mean_wm2 = 0.0;
  double std_wm2 = 1.0;

  double normalize(double y) const { return (y - mean_wm2) / std_wm2; }
  double denormalize(double z) const { return z * std_wm2 + mean_wm2; }
};

inline NormStats compute_stats(const std::vector<double>& train_targets) {
  if (train_targets.empty()) throw ConfigError("compute_stats: empty training split");
  const double n = static_cast<double>(train_targets.size());
  double mean = 0;
  for (double y : train_targets) mean += y;
  mean /= n;
  double var = 0;
  for (double y : train_targets) var += (y - mean) * (y - mean);
  var /= n;
  const double sd = std::sqrt(var);
  if (!(sd > 0)) throw ConfigError("compute_stats: training targets have zero standard deviation");
  return {mean, sd};
}

inline NormStats compute_stats(const std::vector<Sample>& train_samples) {
  std::vector<double> y;
  y.reserve(train_samples.size());
  for (const auto& s : train_samples) y.push_back(s.irradiance_wm2);
  return compute_stats(y);
}

inline std::vector<double> normalize(const std::vector<double>& y, const NormStats& st) {
  std::vector<double> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = st.normalize(y[i]);
  return out;
}

inline std::vector<double> denormalize(const std::vector<double>& z, const NormStats& st) {
  std::vector<double> out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = st.denormalize(z[i]);
  return out;
}

inline nlohmann::json to_json(const NormStats& s) {
  return {{"mean_wm2", s.mean_wm2}, {"std_wm2", s.std_wm2}, {"std_convention", "population"}};
}

inline NormStats stats_from_json(const nlohmann::json& j) {
  NormStats s{j.at("mean_wm2").get<double>(), j.at("std_wm2").get<double>()};
  if (!(s.std_wm2 > 0)) throw ConfigError("stats: std_wm2 must be positive");
  return s;
}

inline void write_stats(const NormStats& s, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw InputError("cannot write " + path.string());
  f << to_json(s).dump(2) << '\n';
}

inline NormStats read_stats(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw MissingPrerequisite("stats not found: " + path.string());
  try {
    return stats_from_json(nlohmann::json::parse(f));
  } catch (const nlohmann::json::exception& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

}  // namespace skycast::data
