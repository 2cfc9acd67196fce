// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The skycast Authors
#pragma once

#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "skycast/dataset/sample.hpp"

namespace skycast::data {

struct FilterRules {
  int night_start_hour = 0;  // local, inclusive
  int night_end_hour = 3;    // local, exclusive
  double min_irradiance_wm2 = 2.0;
  int utc_offset_minutes = 0;
  std::set<std::string> blocklist;  // image paths, file names or ISO timestamps
};

/// Each removed sample is counted under the first rule it violates, in the
/// order night, low irradiance, blocklist.
struct FilterCounts {
  std::size_t input = 0;
  std::size_t removed_night = 0;
  std::size_t removed_low_irradiance = 0;
  std::size_t removed_blocklist = 0;
  std::size_t kept = 0;
};

struct FilterResult {
  std::vector<Sample> samples;
  FilterCounts counts;
};

inline nlohmann::json to_json(const FilterCounts& c) {
  return {{"input", c.input},
          {"removed_night", c.removed_night},
          {"removed_low_irradiance", c.removed_low_irradiance},
          {"removed_blocklist", c.removed_blocklist},
          {"kept", c.kept}};
}

/// One entry per line; blank lines and lines starting with '#' are ignored.
inline std::set<std::string> read_blocklist(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot read blocklist " + path.string());
  std::set<std::string> out;
  std::string line;
  while (std::getline(f, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    out.insert(line);
  }
  return out;
}

inline bool in_night_window(const Sample& s, const FilterRules& rules) {
  const int h = local_time(s.timestamp, rules.utc_offset_minutes).hour;
  return h >= rules.night_start_hour && h < rules.night_end_hour;
}

inline bool is_blocklisted(const Sample& s, const FilterRules& rules) {
  if (rules.blocklist.empty()) return false;
  if (rules.blocklist.count(format_timestamp(s.timestamp))) return true;
  for (const auto& p : s.image_paths)
    if (rules.blocklist.count(p) || rules.blocklist.count(std::filesystem::path(p).filename().string())) return true;
  return false;
}

inline FilterResult filter_samples(const std::vector<Sample>& samples, const FilterRules& rules) {
  FilterResult out;
  out.counts.input = samples.size();
  for (const auto& s : samples) {
    if (in_night_window(s, rules)) {
      ++out.counts.removed_night;
    } else if (s.irradiance_wm2 < rules.min_irradiance_wm2) {
      ++out.counts.removed_low_irradiance;
    } else if (is_blocklisted(s, rules)) {
      ++out.counts.removed_blocklist;
    } else {
      out.samples.push_back(s);
    }
  }
  out.counts.kept = out.samples.size();
  return out;
}

}  // namespace skycast::data
