// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The skycast Authors
#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "skycast/dataset/time.hpp"

namespace skycast::data {

enum class Split { train, val, test };

inline const char* split_name(Split s) {
  switch (s) {
    case Split::train: return "train";
    case Split::val: return "val";
    case Split::test: return "test";
  }
  return "?";
}

inline Split parse_split(const std::string& s) {
  if (s == "train") return Split::train;
  if (s == "val") return Split::val;
  if (s == "test") return Split::test;
  throw InputError("unknown split '" + s + "'");
}

/// One timestamped sky image (or short/long exposure pair) and the
/// irradiance measured over its averaging window.
struct Sample {
  Timestamp timestamp{};
  std::vector<std::string> image_paths;
  double irradiance_wm2 = 0.0;
  Split split = Split::train;

  bool operator==(const Sample&) const = default;
};

inline nlohmann::json to_json(const Sample& s) {
  return {{"timestamp", format_timestamp(s.timestamp)},
          {"image_paths", s.image_paths},
          {"irradiance_wm2", s.irradiance_wm2},
          {"split", split_name(s.split)}};
}

inline Sample sample_from_json(const nlohmann::json& j) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (it.key() != "timestamp" && it.key() != "image_paths" && it.key() != "irradiance_wm2" && it.key() != "split")
      throw InputError("manifest: unknown field '" + it.key() + "'");
  Sample s;
  s.timestamp = parse_timestamp(j.at("timestamp").get<std::string>());
  s.image_paths = j.at("image_paths").get<std::vector<std::string>>();
  if (s.image_paths.empty() || s.image_paths.size() > 2) throw InputError("manifest: image_paths must hold 1 or 2 paths");
  s.irradiance_wm2 = j.at("irradiance_wm2").get<double>();
  if (s.irradiance_wm2 < 0) throw InputError("manifest: negative irradiance");
  s.split = parse_split(j.at("split").get<std::string>());
  return s;
}

/// JSON-lines, one sample per line, in the given order.
inline void write_manifest(const std::vector<Sample>& samples, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw InputError("cannot write " + path.string());
  for (const auto& s : samples) f << to_json(s).dump() << '\n';
}

inline std::vector<Sample> read_manifest(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw MissingPrerequisite("manifest not found: " + path.string());
  std::vector<Sample> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      out.push_back(sample_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw InputError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace skycast::data
