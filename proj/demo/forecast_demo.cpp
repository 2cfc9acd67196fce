// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The skycast Authors
//
// Library walk-through: synthesize a small sky archive, prepare it, train
// the image-to-irradiance backbone briefly, score it and draw an attention
// rollout for one validation frame.
//
//   forecast_demo [work_dir]
#include <cstdio>
#include <filesystem>

#include "skycast/dataset.hpp"
#include "skycast/explain.hpp"
#include "skycast/training.hpp"

using namespace skycast;
namespace fs = std::filesystem;

int main(int argc, char** argv) {
  const fs::path work = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "skycast_demo";

  data::SynthConfig sc;
  sc.image_side = 32;
  sc.day_count = 20;
  const auto raw = data::synth_sky(sc, work / "synthetic");

  data::ArchiveSource src;
  src.image_index = raw.image_index;
  src.radiometer = raw.radiometer;
  const auto rep = data::prepare_dataset(src, {}, work / "prepared");
  std::printf("train/val/test: %zu/%zu/%zu, mean %.1f W/m2\n", rep.train, rep.val, rep.test, rep.stats.mean_wm2);

  data::PreprocessConfig pre;
  pre.side = 32;
  data::SequenceOptions seq;
  training::TrainData d;
  d.stats = rep.stats;
  d.clear_sky = clearsky::table_clearsky(raw.clearsky);
  d.train = training::load_split(work / "prepared", data::Split::train, pre, d.stats, seq);
  d.val = training::load_split(work / "prepared", data::Split::val, pre, d.stats, seq);

  model::Forecaster<float> m(model::BackboneConfig::tiny(), model::DecoderConfig::tiny(), 0);
  training::TrainConfig tc;
  tc.stage1 = {1, 3, 16, 1e-3, training::ScheduleKind::cosine_anneal};
  for (const auto& r : training::train_stage1(m, d, tc, 0))
    std::printf("epoch %zu: train loss %.3f, val rmse %.1f W/m2\n", r.epoch, r.train_loss, r.val_rmse);

  const auto& frame = d.val.images[d.val.size() / 2];
  numcore::NoGradGuard ng;
  const auto map = explain::attention_rollout(m.encode(frame, true).attention, {});
  data::write_png(explain::overlay(map, data::resize_bilinear(frame.front(), 256, 256)), work / "rollout.png");
  std::printf("rollout written to %s\n", (work / "rollout.png").c_str());
}
