// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The skycast Authors
#pragma once

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <map>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "skycast/dataset/sample.hpp"
#include "skycast/log.hpp"

namespace skycast::data {

struct ImageRecord {
  Timestamp timestamp{};
  std::vector<std::string> image_paths;  // (short, long) order for exposure pairs
};

struct RadiometerReading {
  double t = 0;  // seconds since the Unix epoch
  double ghi_wm2 = 0;
};

struct AlignResult {
  std::vector<Sample> samples;
  std::size_t dropped_no_coverage = 0;
};

/// Assigns each image the mean irradiance over [t_image, t_image + window).
/// Images whose window holds no reading are dropped and counted.
inline AlignResult align_radiometer(const std::vector<ImageRecord>& images, std::vector<RadiometerReading> series,
                                    double window_seconds = 30.0) {
  if (!(window_seconds > 0)) throw ConfigError("align_radiometer: window must be positive");
  std::stable_sort(series.begin(), series.end(), [](const auto& a, const auto& b) { return a.t < b.t; });
  AlignResult out;
  for (const auto& img : images) {
    const double start = epoch_seconds(img.timestamp);
    const double end = start + window_seconds;
    auto it = std::lower_bound(series.begin(), series.end(), start, [](const auto& r, double t) { return r.t < t; });
    double total = 0;
    std::size_t n = 0;
    for (; it != series.end() && it->t < end; ++it) {
      total += it->ghi_wm2;
      ++n;
    }
    if (n == 0) {
      ++out.dropped_no_coverage;
      log_warn("no radiometer coverage for image at " + format_timestamp(img.timestamp) + ", dropped");
      continue;
    }
    Sample s;
    s.timestamp = img.timestamp;
    s.image_paths = img.image_paths;
    s.irradiance_wm2 = std::max(0.0, total / static_cast<double>(n));
    out.samples.push_back(std::move(s));
  }
  return out;
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    out.push_back(cell);
  }
  return out;
}

inline double parse_double(const std::string& s, const std::string& where) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw InputError(where + ": not a number '" + s + "'");
  }
}

}  // namespace detail

/// CSV with header "timestamp,ghi_wm2". Timestamps are ISO-8601 UTC or
/// numeric epoch seconds (fractions allowed).
inline std::vector<RadiometerReading> read_radiometer_csv(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot read radiometer series " + path.string());
  std::vector<RadiometerReading> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto cells = detail::split_csv_line(line);
    if (lineno == 1 && !cells.empty() && cells[0] == "timestamp") continue;
    const std::string where = path.string() + ":" + std::to_string(lineno);
    if (cells.size() < 2) throw InputError(where + ": expected timestamp,ghi_wm2");
    RadiometerReading r;
    const bool iso = cells[0].find('-') != std::string::npos && cells[0].size() >= 19;
    r.t = iso ? epoch_seconds(parse_timestamp(cells[0])) : detail::parse_double(cells[0], where);
    r.ghi_wm2 = detail::parse_double(cells[1], where);
    out.push_back(r);
  }
  return out;
}

inline void write_radiometer_csv(const std::vector<RadiometerReading>& series, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw InputError("cannot write " + path.string());
  f << "timestamp,ghi_wm2\n";
  char buf[64];
  for (const auto& r : series) {
    std::snprintf(buf, sizeof buf, "%.3f,%.6f\n", r.t, r.ghi_wm2);
    f << buf;
  }
}

/// CSV "timestamp,path[,path2]"; relative paths resolve against the file's
/// directory.
inline std::vector<ImageRecord> read_image_index_csv(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot read image index " + path.string());
  std::vector<ImageRecord> out;
  std::string line;
  std::size_t lineno = 0;
  const auto base = path.parent_path();
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto cells = detail::split_csv_line(line);
    if (lineno == 1 && !cells.empty() && cells[0] == "timestamp") continue;
    if (cells.size() < 2 || cells.size() > 3)
      throw InputError(path.string() + ":" + std::to_string(lineno) + ": expected timestamp,path[,path2]");
    ImageRecord r;
    r.timestamp = parse_timestamp(cells[0]);
    for (std::size_t i = 1; i < cells.size(); ++i) {
      std::filesystem::path p(cells[i]);
      r.image_paths.push_back((p.is_absolute() ? p : base / p).lexically_normal().string());
    }
    out.push_back(std::move(r));
  }
  return out;
}

inline void write_image_index_csv(const std::vector<ImageRecord>& images, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw InputError("cannot write " + path.string());
  f << "timestamp,path\n";
  const auto base = path.parent_path();
  for (const auto& r : images) {
    f << format_timestamp(r.timestamp);
    for (const auto& p : r.image_paths) f << ',' << std::filesystem::path(p).lexically_relative(base).string();
    f << '\n';
  }
}

/// Scans a directory of PNGs named "<anything>_YYYYMMDDHHMMSS[<suffix>].png"
/// (the first 14-digit run is the timestamp). When exposure suffixes are
/// given, files sharing a timestamp are paired in (short, long) order and
/// incomplete pairs are skipped.
inline std::vector<ImageRecord> scan_image_directory(const std::filesystem::path& dir,
                                                     const std::string& short_suffix = "",
                                                     const std::string& long_suffix = "") {
  if (!std::filesystem::is_directory(dir)) throw InputError("image directory not found: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".png") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  auto stamp_of = [](const std::string& stem) -> std::string {
    for (std::size_t i = 0; i + 14 <= stem.size(); ++i) {
      bool digits = true;
      for (std::size_t j = 0; j < 14 && digits; ++j) digits = std::isdigit(static_cast<unsigned char>(stem[i + j])) != 0;
      if (digits) return stem.substr(i, 14);
    }
    return {};
  };
  const bool paired = !short_suffix.empty() || !long_suffix.empty();
  std::vector<ImageRecord> out;
  if (!paired) {
    for (const auto& p : files) {
      auto st = stamp_of(p.stem().string());
      if (st.empty()) continue;
      out.push_back({parse_timestamp(st), {p.string()}});
    }
  } else {
    std::map<std::string, std::pair<std::string, std::string>> pairs;
    for (const auto& p : files) {
      const auto stem = p.stem().string();
      auto st = stamp_of(stem);
      if (st.empty()) continue;
      if (stem.ends_with(short_suffix)) pairs[st].first = p.string();
      else if (stem.ends_with(long_suffix)) pairs[st].second = p.string();
    }
    for (const auto& [st, pr] : pairs) {
      if (pr.first.empty() || pr.second.empty()) {
        log_warn("incomplete exposure pair at " + st + ", skipped");
        continue;
      }
      out.push_back({parse_timestamp(st), {pr.first, pr.second}});
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.timestamp < b.timestamp; });
  return out;
}

}  // namespace skycast::data
