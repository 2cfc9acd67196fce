// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The skycast Authors
#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <vector>

#include "skycast/clearsky/solis.hpp"
#include "skycast/dataset/align.hpp"

namespace skycast::clearsky {

constexpr double kClearSkyEpsilon = 1.0;  // W/m^2

/// Clear-sky-index persistence; plain persistence when the current clear-sky
/// value is below `eps`.
inline double smart_persistence(double y_t, double y_clear_t, double y_clear_tT, double eps = kClearSkyEpsilon) {
  if (y_t < 0 || y_clear_t < 0 || y_clear_tT < 0) throw ContractError("smart_persistence: negative input");
  if (y_clear_t < eps) return y_t;
  return y_t / y_clear_t * y_clear_tT;
}

/// out[i] predicts target i + shift from per_image[i].
inline std::vector<double> backbone_persistence(const std::vector<double>& per_image, std::size_t shift) {
  if (shift >= per_image.size()) return {};
  return {per_image.begin(), per_image.end() - static_cast<std::ptrdiff_t>(shift)};
}

/// Clear-sky values read from a CSV "timestamp,ghi_clear_wm2", linearly
/// interpolated between rows.
inline ClearSkyFn table_clearsky(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw MissingPrerequisite("clear-sky table not found: " + path.string());
  auto rows = data::read_radiometer_csv(path);
  std::map<double, double> table;
  for (const auto& r : rows) table[r.t] = r.ghi_wm2;
  if (table.empty()) throw InputError("clear-sky table is empty: " + path.string());
  return [table = std::move(table), name = path.string()](data::Timestamp ts) {
    const double t = data::epoch_seconds(ts);
    auto hi = table.lower_bound(t);
    if (hi != table.end() && hi->first == t) return hi->second;
    if (hi == table.end() || hi == table.begin())
      throw InputError("clear-sky table " + name + " does not cover " + data::format_timestamp(ts));
    auto lo = std::prev(hi);
    const double w = (t - lo->first) / (hi->first - lo->first);
    return lo->second * (1 - w) + hi->second * w;
  };
}

inline void write_clearsky_csv(const std::vector<data::Timestamp>& times, const ClearSkyFn& fn,
                               const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw InputError("cannot write " + path.string());
  f << "timestamp,ghi_clear_wm2\n";
  char buf[96];
  for (auto t : times) {
    std::snprintf(buf, sizeof buf, "%s,%.6f\n", data::format_timestamp(t).c_str(), std::max(0.0, fn(t)));
    f << buf;
  }
}

}  // namespace skycast::clearsky
