// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The skycast Authors
#pragma once

#include <png.h>

#include <algorithm>
#include <cstring>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "skycast/dataset/align.hpp"
#include "skycast/dataset/filter.hpp"
#include "skycast/dataset/split.hpp"
#include "skycast/dataset/stats.hpp"
#include "skycast/log.hpp"

namespace skycast::data {

/// Where the raw archive lives. Either `image_index` (CSV) or `image_dir`
/// (directory scan) must be set.
struct ArchiveSource {
  std::filesystem::path image_index;
  std::filesystem::path image_dir;
  std::string short_suffix, long_suffix;
  std::filesystem::path radiometer;
  std::filesystem::path blocklist;
  double window_seconds = 30.0;
};

struct PrepareReport {
  std::size_t images = 0;
  std::size_t dropped_undecodable = 0;
  std::size_t dropped_no_coverage = 0;
  FilterCounts filter;
  std::size_t train = 0, val = 0, test = 0;
  NormStats stats;
};

inline nlohmann::json to_json(const PrepareReport& r) {
  return {{"images", r.images},
          {"dropped_undecodable", r.dropped_undecodable},
          {"dropped_no_coverage", r.dropped_no_coverage},
          {"filter", to_json(r.filter)},
          {"split_sizes", {{"train", r.train}, {"val", r.val}, {"test", r.test}}},
          {"stats", to_json(r.stats)}};
}

/// Checks the PNG header without decoding pixels.
inline bool png_readable(const std::string& path) {
  png_image img;
  std::memset(&img, 0, sizeof img);
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&img, path.c_str())) return false;
  png_image_free(&img);
  return true;
}

inline std::filesystem::path manifest_path(const std::filesystem::path& dir, Split s) {
  return dir / (std::string("manifest_") + split_name(s) + ".jsonl");
}

/// Aligns, filters and splits the archive, then writes one manifest per
/// split, stats.json (training split only) and prepare_report.json to
/// `out_dir`. Manifests are ordered by timestamp.
inline PrepareReport prepare_dataset(const ArchiveSource& src, FilterRules rules, const std::filesystem::path& out_dir) {
  std::vector<ImageRecord> images;
  if (!src.image_index.empty()) {
    if (!std::filesystem::exists(src.image_index))
      throw InputError("image index not found: " + src.image_index.string());
    images = read_image_index_csv(src.image_index);
  } else if (!src.image_dir.empty()) {
    images = scan_image_directory(src.image_dir, src.short_suffix, src.long_suffix);
  } else {
    throw ConfigError("dataset: set image_index or image_dir");
  }
  if (images.empty()) throw InputError("no images found in the archive");
  if (!std::filesystem::exists(src.radiometer))
    throw InputError("radiometer series not found: " + src.radiometer.string());
  if (!src.blocklist.empty()) rules.blocklist = read_blocklist(src.blocklist);

  PrepareReport rep;
  rep.images = images.size();
  std::vector<ImageRecord> readable;
  for (auto& r : images) {
    bool ok = true;
    for (const auto& p : r.image_paths) ok = ok && png_readable(p);
    if (ok) {
      readable.push_back(std::move(r));
    } else {
      ++rep.dropped_undecodable;
      log_warn("undecodable image at " + format_timestamp(r.timestamp) + ", dropped");
    }
  }
  std::stable_sort(readable.begin(), readable.end(),
                   [](const auto& a, const auto& b) { return a.timestamp < b.timestamp; });

  auto aligned = align_radiometer(readable, read_radiometer_csv(src.radiometer), src.window_seconds);
  rep.dropped_no_coverage = aligned.dropped_no_coverage;
  auto filtered = filter_samples(aligned.samples, rules);
  rep.filter = filtered.counts;
  auto sets = split_by_day(filtered.samples, rules.utc_offset_minutes);
  rep.train = sets.train.size();
  rep.val = sets.val.size();
  rep.test = sets.test.size();
  rep.stats = compute_stats(sets.train);

  std::filesystem::create_directories(out_dir);
  for (Split s : {Split::train, Split::val, Split::test}) write_manifest(sets.get(s), manifest_path(out_dir, s));
  write_stats(rep.stats, out_dir / "stats.json");
  std::ofstream f(out_dir / "prepare_report.json", std::ios::trunc);
  f << to_json(rep).dump(2) << '\n';
  return rep;
}

}  // namespace skycast::data
