// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The skycast Authors
#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "skycast/cli/run_config.hpp"
#include "skycast/explain/rollout.hpp"
#include "skycast/metrics.hpp"
#include "skycast/numcore/checkpoint.hpp"
#include "skycast/training.hpp"

namespace skycast::cli {

using Model = model::Forecaster<float>;

/// Synthesizes the archive when configured, then aligns, filters, splits
/// and normalizes it into prepared_dir().
inline data::PrepareReport cmd_prepare(const RunConfig& c) {
  data::ArchiveSource src = c.dataset.archive;
  if (c.dataset.synthetic) {
    const auto sum = data::synth_sky(*c.dataset.synthetic, c.synthetic_dir());
    src = {};
    src.image_index = sum.image_index;
    src.radiometer = sum.radiometer;
    src.window_seconds = c.dataset.synthetic->window_seconds;
  }
  auto rep = data::prepare_dataset(src, c.filter, c.prepared_dir());
  if (rep.train == 0) throw InputError("prepare: no training samples survived filtering");
  std::ofstream(c.output_dir / "resolved_config.json", std::ios::trunc) << to_json(c).dump(2) << '\n';
  log_info("prepared " + std::to_string(rep.train) + "/" + std::to_string(rep.val) + "/" + std::to_string(rep.test) +
           " train/val/test samples in " + c.prepared_dir().string());
  return rep;
}

inline data::NormStats prepared_stats(const RunConfig& c) {
  const auto p = c.prepared_dir() / "stats.json";
  if (!fs::exists(p)) throw MissingPrerequisite("no prepared dataset in " + c.prepared_dir().string() + "; run prepare first");
  return data::read_stats(p);
}

inline training::FrameSet load_split(const RunConfig& c, data::Split split, const data::NormStats& stats,
                                     const data::SequenceOptions& seq) {
  const auto manifest = data::manifest_path(c.prepared_dir(), split);
  if (!fs::exists(manifest)) throw MissingPrerequisite("manifest not found: " + manifest.string() + "; run prepare first");
  return training::load_split(c.prepared_dir(), split, c.preprocess(), stats, seq);
}

inline training::TrainData load_train_data(const RunConfig& c, const data::SequenceOptions& seq) {
  training::TrainData d;
  d.stats = prepared_stats(c);
  d.train = load_split(c, data::Split::train, d.stats, seq);
  d.val = load_split(c, data::Split::val, d.stats, seq);
  d.clear_sky = c.clear_sky();
  return d;
}

inline std::unique_ptr<Model> make_model(const RunConfig& c) {
  return std::make_unique<Model>(c.backbone, c.decoder, c.seed);
}

inline std::unique_ptr<Model> load_model(const RunConfig& c, const fs::path& ckpt) {
  auto m = make_model(c);
  const auto s = numcore::load_checkpoint(m->params(), ckpt);
  if (!s.missing.empty() || !s.unexpected.empty())
    throw InputError("checkpoint " + ckpt.string() + " does not match the configured model");
  return m;
}

/// Stage list for a --stage argument: "1", "2", "3" or "all".
inline std::vector<int> parse_stages(const std::string& s, const RunConfig& c) {
  if (s == "1") return {1};
  if (s == "2") return {2};
  if (s == "3") return {3};
  if (s == "all") return c.training.skip_stage1 ? std::vector<int>{2, 3} : std::vector<int>{1, 2, 3};
  throw ConfigError("unknown stage '" + s + "' (expected 1, 2, 3 or all)");
}

/// Runs the requested stages with one in-memory model, writing one
/// checkpoint and one epoch log per stage. Each stage starts from the
/// previous stage's checkpoint file.
inline void cmd_train(const RunConfig& c, const std::vector<int>& stages) {
  std::optional<training::TrainData> data;
  std::unique_ptr<Model> m;
  for (int stage : stages) {
    if (stage == 1 && c.training.skip_stage1) throw ConfigError("stage 1 is disabled by training.skip_stage1");
    const bool from_scratch = stage == 1 || (stage == 2 && c.training.skip_stage1);
    if (!from_scratch && !fs::exists(c.checkpoint(stage - 1)))
      throw MissingPrerequisite("stage " + std::to_string(stage) + " needs " + c.checkpoint(stage - 1).string());
    if (!data) data = load_train_data(c, c.sequence_options());
    m = from_scratch ? make_model(c) : load_model(c, c.checkpoint(stage - 1));
    log_info("training stage " + std::to_string(stage));
    const auto log = training::run_stage(stage, *m, *data, c.training, c.seed);
    numcore::save_checkpoint(m->params(), c.checkpoint(stage));
    training::write_epoch_csv(log, c.log_path(stage));
  }
}

inline std::string eval_dir_name(training::Reference ref, std::size_t k) {
  return std::string(ref == training::Reference::smart_persistence ? "smart" : "backbone") + "_k" + std::to_string(k);
}

/// Scores the final checkpoint on the test split and writes the report,
/// predictions, per-day skill, density grid and plots.
inline metrics::EvalReport cmd_eval(const RunConfig& c, training::Reference ref, std::size_t k) {
  if (k == 0) throw ConfigError("--steps must be >= 1");
  if (c.training.context + k > c.decoder.max_sequence) throw ConfigError("context + steps exceeds decoder.max_sequence");
  const auto ckpt = c.checkpoint(3);
  if (!fs::exists(ckpt)) throw MissingPrerequisite("no trained model: " + ckpt.string() + " (run train --stage all)");
  std::unique_ptr<Model> bp;
  if (ref == training::Reference::backbone_persistence) {
    if (!fs::exists(c.checkpoint(1))) throw MissingPrerequisite("backbone persistence needs " + c.checkpoint(1).string());
    bp = load_model(c, c.checkpoint(1));
  }
  const auto m = load_model(c, ckpt);
  const auto stats = prepared_stats(c);
  const auto seq = c.sequence_options(c.training.context, k);
  const auto test = load_split(c, data::Split::test, stats, seq);
  metrics::PredictionSet pred;
  const auto rep = training::evaluate(*m, test, test.sequences, stats, ref,
                                      ref == training::Reference::smart_persistence ? c.clear_sky() : clearsky::ClearSkyFn{},
                                      bp.get(), &pred);
  const auto dir = c.output_dir / "eval" / eval_dir_name(ref, k);
  metrics::write_report_json(rep, dir / "report.json");
  metrics::write_report_csv(rep, dir / "report.csv");
  metrics::write_per_day_csv(rep, dir / "per_day.csv");
  metrics::write_predictions_csv(pred, dir / "predictions.csv");

  std::vector<double> y, yh;
  for (std::size_t i = k - 1; i < pred.truth.size(); i += k) {
    y.push_back(pred.truth[i]);
    yh.push_back(pred.model[i]);
  }
  const auto hist = metrics::density_export(y, yh, c.eval.density_bins);
  metrics::write_histogram_csv(hist, dir / "density.csv");
  metrics::write_plot(metrics::density_plot(hist), dir / "density.png");

  // One line plot per test day at the final step: truth black, model red,
  // reference blue.
  std::map<std::string, std::array<std::vector<double>, 3>> days;
  for (std::size_t i = k - 1; i < pred.truth.size(); i += k) {
    auto& d = days[metrics::date_of(pred.target_time[i])];
    d[0].push_back(pred.truth[i]);
    d[1].push_back(pred.model[i]);
    d[2].push_back(pred.reference[i]);
  }
  for (const auto& [date, s] : days)
    metrics::write_plot(metrics::line_plot({{s[0], {0, 0, 0}}, {s[2], {0.2f, 0.4f, 1}}, {s[1], {0.9f, 0.1f, 0.1f}}}),
                        dir / ("day_" + date + ".png"));
  char buf[160];
  const auto& h = rep.final_step();
  std::snprintf(buf, sizeof buf, "step %zu: rmse %.2f W/m2, mae %.2f W/m2, fs %.2f %% vs %s (%zu sequences)", h.step,
                h.rmse_wm2, h.mae_wm2, h.fs_pct, h.reference_name.c_str(), rep.sample_count);
  log_info(buf);
  return rep;
}

/// Serves the ablation data per (context, horizon); images load once.
class AblationDataCache {
 public:
  explicit AblationDataCache(const RunConfig& c) : c_(c) {}

  const training::AblationData& operator()(std::size_t context, std::size_t horizon) {
    const auto key = std::make_pair(context, horizon);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    if (!base_) {
      base_.emplace();
      base_->train = load_train_data(c_, c_.sequence_options());
      base_->test = load_split(c_, data::Split::test, base_->train.stats, c_.sequence_options());
    }
    training::AblationData d = *base_;
    const auto opt = c_.sequence_options(context, horizon);
    d.train.train.sequences = data::make_sequences(d.train.train.samples, opt);
    d.train.val.sequences = data::make_sequences(d.train.val.samples, opt);
    d.test.sequences = data::make_sequences(d.test.samples, opt);
    return cache_.emplace(key, std::move(d)).first->second;
  }

 private:
  const RunConfig& c_;
  std::optional<training::AblationData> base_;
  std::map<std::pair<std::size_t, std::size_t>, training::AblationData> cache_;
};

/// Runs one ablation grid over `seeds` (the config seed when empty) and
/// writes ablate/<grid>.csv.
inline std::vector<training::AblationRow> cmd_ablate(const RunConfig& c, const std::string& grid,
                                                     std::vector<std::uint64_t> seeds = {}) {
  const auto points = training::ablation_grid(grid, c.training);
  if (seeds.empty()) seeds.push_back(c.seed);
  std::vector<training::AblationRow> rows;
  if (!points.empty()) {
    for (const auto& p : points)
      if (p.config.context + p.config.horizon > c.decoder.max_sequence)
        throw ConfigError("ablation point " + p.label + " exceeds decoder.max_sequence");
    AblationDataCache cache(c);
    rows = training::run_ablation<float>(grid, points, seeds, c.backbone, c.decoder,
                                         [&](std::size_t s, std::size_t k) -> const training::AblationData& { return cache(s, k); });
  }
  training::write_ablation_csv(rows, c.output_dir / "ablate" / ((grid.empty() ? std::string("empty") : grid) + ".csv"));
  return rows;
}

/// Parses "a.png" or "short.png,long.png" into image paths.
inline std::vector<std::string> split_pair(const std::string& arg) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = arg.find(',', start);
    out.push_back(arg.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

/// Writes a rollout overlay PNG and relevance CSV per image; returns the
/// number of images explained.
inline std::size_t cmd_explain(const RunConfig& c, const std::vector<std::string>& images, int stage = 3) {
  if (images.empty()) return 0;
  const auto ckpt = c.checkpoint(stage);
  if (!fs::exists(ckpt)) throw MissingPrerequisite("explain needs " + ckpt.string());
  const auto m = load_model(c, ckpt);
  const auto pre = c.preprocess();
  const auto dir = c.output_dir / "explain";
  for (const auto& arg : images) {
    std::vector<data::Image> frame;
    for (const auto& p : split_pair(arg)) {
      if (!fs::exists(p)) throw InputError("image not found: " + p);
      frame.push_back(data::preprocess_image(data::read_png(p), pre));
    }
    numcore::NoGradGuard ng;
    const auto enc = m->encode(frame, true);
    const auto map = explain::attention_rollout(enc.attention, c.explain);
    const std::size_t scale = (223 + pre.side) / pre.side;
    const auto shown = data::resize_bilinear(frame.back(), pre.side * scale, pre.side * scale);
    const auto stem = fs::path(split_pair(arg).front()).stem().string();
    data::write_png(explain::overlay(map, shown), dir / (stem + "_rollout.png"));
    explain::write_map_csv(map, dir / (stem + "_rollout.csv"));
  }
  log_info("wrote " + std::to_string(images.size()) + " rollout maps to " + dir.string());
  return images.size();
}

}  // namespace skycast::cli
