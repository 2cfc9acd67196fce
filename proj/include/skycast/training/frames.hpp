// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The skycast Authors
#pragma once

#include <filesystem>
#include <vector>

#include "skycast/clearsky/persistence.hpp"
#include "skycast/dataset/archive.hpp"
#include "skycast/dataset/preprocess.hpp"
#include "skycast/dataset/sequences.hpp"
#include "skycast/dataset/stats.hpp"

namespace skycast::training {

/// One split held in memory: preprocessed images, normalized targets and
/// the sequences built over them.
struct FrameSet {
  data::Split split = data::Split::train;
  std::vector<data::Sample> samples;
  std::vector<std::vector<data::Image>> images;  // per sample, 1 or 2 exposures
  std::vector<float> targets;                    // normalized
  std::vector<data::SequenceSample> sequences;

  std::size_t size() const { return samples.size(); }
};

inline FrameSet load_frames(std::vector<data::Sample> samples, data::Split split, const data::PreprocessConfig& pre,
                            const data::NormStats& stats, const data::SequenceOptions& seq) {
  FrameSet fs;
  fs.split = split;
  fs.samples = std::move(samples);
  const auto mask = pre.mask.empty() ? std::vector<std::uint8_t>{} : data::build_mask(pre.mask, pre.side);
  for (const auto& s : fs.samples) {
    std::vector<data::Image> imgs;
    for (const auto& p : s.image_paths)
      imgs.push_back(data::preprocess_image(data::read_png(p), pre, mask.empty() ? nullptr : &mask));
    fs.images.push_back(std::move(imgs));
    fs.targets.push_back(static_cast<float>(stats.normalize(s.irradiance_wm2)));
  }
  fs.sequences = data::make_sequences(fs.samples, seq);
  return fs;
}

/// Reads a prepared manifest and loads it.
inline FrameSet load_split(const std::filesystem::path& prepared_dir, data::Split split,
                           const data::PreprocessConfig& pre, const data::NormStats& stats,
                           const data::SequenceOptions& seq) {
  return load_frames(data::read_manifest(data::manifest_path(prepared_dir, split)), split, pre, stats, seq);
}

/// Everything a training run reads.
struct TrainData {
  FrameSet train, val;
  data::NormStats stats;
  clearsky::ClearSkyFn clear_sky;
};

}  // namespace skycast::training
