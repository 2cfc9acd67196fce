// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The skycast Authors
#pragma once

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include <json.hpp>

#include "skycast/backbone/config.hpp"
#include "skycast/clearsky/persistence.hpp"
#include "skycast/clearsky/solis.hpp"
#include "skycast/dataset/archive.hpp"
#include "skycast/dataset/preprocess.hpp"
#include "skycast/dataset/sequences.hpp"
#include "skycast/dataset/synth.hpp"
#include "skycast/explain/rollout.hpp"
#include "skycast/json_util.hpp"
#include "skycast/training/config.hpp"

namespace skycast::cli {

namespace fs = std::filesystem;

inline constexpr const char* kOutputDirEnv = "SKYCAST_OUTPUT_DIR";

struct SolisSite {
  double latitude = 0, longitude = 0;
  fs::path meteo;  // optional monthly climatology JSON
};

/// Either a synthetic generator or a real archive, plus the clear-sky model
/// used by smart persistence.
struct DatasetSpec {
  std::optional<data::SynthConfig> synthetic;
  data::ArchiveSource archive;
  fs::path clearsky_table;  // CSV "timestamp,ghi_wm2"
  std::optional<SolisSite> solis;
  fs::path mask_png;
  std::vector<data::Polygon> mask_polygons;
  double mask_outside_circle = 0;
  std::optional<data::CropRect> crop;
};

struct EvalOptions {
  std::size_t density_bins = 50;
};

struct RunConfig {
  std::uint64_t seed = 0;
  fs::path output_dir = "runs/default";
  DatasetSpec dataset;
  data::FilterRules filter;
  model::BackboneConfig backbone;
  model::DecoderConfig decoder;
  training::TrainConfig training;
  explain::RolloutConfig explain;
  EvalOptions eval;

  fs::path synthetic_dir() const { return output_dir / "synthetic"; }
  fs::path prepared_dir() const { return output_dir / "prepared"; }
  fs::path checkpoint(int stage) const { return output_dir / "checkpoints" / ("stage" + std::to_string(stage) + ".ckpt"); }
  fs::path log_path(int stage) const { return output_dir / "logs" / ("stage" + std::to_string(stage) + ".csv"); }

  data::PreprocessConfig preprocess() const {
    data::PreprocessConfig p;
    p.side = backbone.image_side;
    p.crop = dataset.crop;
    if (!dataset.mask_png.empty()) p.mask = data::mask_from_png(dataset.mask_png);
    p.mask.polygons = dataset.mask_polygons;
    p.mask.outside_circle_fraction = dataset.mask_outside_circle;
    return p;
  }

  data::SequenceOptions sequence_options(std::size_t context, std::size_t horizon) const {
    data::SequenceOptions o;
    o.context = context;
    o.horizon = horizon;
    o.cadence_minutes = training.cadence_minutes;
    o.tolerance = training.cadence_tolerance;
    return o;
  }
  data::SequenceOptions sequence_options() const { return sequence_options(training.context, training.horizon); }

  /// Clear-sky irradiance used by smart persistence.
  clearsky::ClearSkyFn clear_sky() const {
    if (dataset.synthetic) return clearsky::table_clearsky(synthetic_dir() / "clearsky.csv");
    if (!dataset.clearsky_table.empty()) return clearsky::table_clearsky(dataset.clearsky_table);
    if (dataset.solis) {
      clearsky::MeteoClimatology clim;
      if (!dataset.solis->meteo.empty()) clim = clearsky::read_meteo(dataset.solis->meteo);
      return clearsky::solis_clearsky(dataset.solis->latitude, dataset.solis->longitude, clim);
    }
    throw ConfigError("dataset: set clearsky_table or solis for smart persistence");
  }

  void validate() const {
    backbone.validate();
    decoder.validate();
    training.validate();
    explain.validate();
    if (training.context + training.horizon > decoder.max_sequence)
      throw ConfigError("context + horizon exceeds decoder.max_sequence");
    if (dataset.synthetic) {
      dataset.synthetic->validate();
      if (dataset.synthetic->dual_exposure != backbone.dual_exposure)
        throw ConfigError("synthetic.dual_exposure and backbone.dual_exposure disagree");
    } else if (dataset.archive.image_index.empty() && dataset.archive.image_dir.empty()) {
      throw ConfigError("dataset: give synthetic parameters or an archive (image_index or image_dir)");
    }
    if (eval.density_bins == 0) throw ConfigError("eval.density_bins must be >= 1");
  }
};

namespace detail {

inline fs::path resolve(const fs::path& base, const std::string& p) {
  if (p.empty()) return {};
  fs::path path(p);
  return path.is_absolute() ? path : (base / path).lexically_normal();
}

inline DatasetSpec dataset_from_json(const nlohmann::json& j, const fs::path& base) {
  check_keys(j, {"synthetic", "image_index", "image_dir", "short_suffix", "long_suffix", "radiometer", "blocklist",
                 "window_seconds", "clearsky_table", "solis", "mask_png", "mask_polygons", "mask_outside_circle", "crop"},
             "dataset");
  DatasetSpec d;
  if (j.contains("synthetic")) d.synthetic = data::synth_config_from_json(j["synthetic"]);
  std::string s;
  auto path_opt = [&](const char* key, fs::path& out) {
    s.clear();
    read_opt(j, key, s, "dataset");
    out = resolve(base, s);
  };
  path_opt("image_index", d.archive.image_index);
  path_opt("image_dir", d.archive.image_dir);
  path_opt("radiometer", d.archive.radiometer);
  path_opt("blocklist", d.archive.blocklist);
  path_opt("clearsky_table", d.clearsky_table);
  path_opt("mask_png", d.mask_png);
  read_opt(j, "short_suffix", d.archive.short_suffix, "dataset");
  read_opt(j, "long_suffix", d.archive.long_suffix, "dataset");
  read_opt(j, "window_seconds", d.archive.window_seconds, "dataset");
  read_opt(j, "mask_outside_circle", d.mask_outside_circle, "dataset");
  if (j.contains("mask_polygons")) {
    try {
      d.mask_polygons = j["mask_polygons"].get<std::vector<data::Polygon>>();
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("dataset.mask_polygons: ") + e.what());
    }
  }
  if (j.contains("crop")) {
    const auto& c = j["crop"];
    check_keys(c, {"x", "y", "width", "height"}, "dataset.crop");
    data::CropRect r;
    read_opt(c, "x", r.x, "dataset.crop");
    read_opt(c, "y", r.y, "dataset.crop");
    read_opt(c, "width", r.width, "dataset.crop");
    read_opt(c, "height", r.height, "dataset.crop");
    d.crop = r;
  }
  if (j.contains("solis")) {
    const auto& so = j["solis"];
    check_keys(so, {"latitude", "longitude", "meteo"}, "dataset.solis");
    SolisSite site;
    read_opt(so, "latitude", site.latitude, "dataset.solis");
    read_opt(so, "longitude", site.longitude, "dataset.solis");
    std::string m;
    read_opt(so, "meteo", m, "dataset.solis");
    site.meteo = resolve(base, m);
    d.solis = site;
  }
  return d;
}

inline data::FilterRules filter_from_json(const nlohmann::json& j) {
  check_keys(j, {"night_start_hour", "night_end_hour", "min_irradiance_wm2", "utc_offset_minutes"}, "filter");
  data::FilterRules r;
  read_opt(j, "night_start_hour", r.night_start_hour, "filter");
  read_opt(j, "night_end_hour", r.night_end_hour, "filter");
  read_opt(j, "min_irradiance_wm2", r.min_irradiance_wm2, "filter");
  read_opt(j, "utc_offset_minutes", r.utc_offset_minutes, "filter");
  return r;
}

}  // namespace detail

/// Parses and validates a run configuration. Relative paths resolve against
/// `base_dir`; SKYCAST_OUTPUT_DIR, when set, replaces output_dir.
inline RunConfig run_config_from_json(const nlohmann::json& j, const fs::path& base_dir = ".") {
  check_keys(j, {"seed", "output_dir", "dataset", "filter", "backbone", "decoder", "training", "explain", "eval"},
             "config");
  RunConfig c;
  read_opt(j, "seed", c.seed, "config");
  std::string out = "runs/default";
  read_opt(j, "output_dir", out, "config");
  c.output_dir = detail::resolve(base_dir, out);
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) c.output_dir = env;
  if (!j.contains("dataset")) throw ConfigError("config: missing 'dataset'");
  c.dataset = detail::dataset_from_json(j["dataset"], base_dir);
  if (j.contains("filter")) c.filter = detail::filter_from_json(j["filter"]);
  if (j.contains("backbone")) c.backbone = model::backbone_config_from_json(j["backbone"]);
  if (j.contains("decoder")) c.decoder = model::decoder_config_from_json(j["decoder"]);
  if (j.contains("training")) c.training = training::train_config_from_json(j["training"]);
  if (j.contains("explain")) c.explain = explain::rollout_config_from_json(j["explain"]);
  if (j.contains("eval")) {
    check_keys(j["eval"], {"density_bins"}, "eval");
    read_opt(j["eval"], "density_bins", c.eval.density_bins, "eval");
  }
  c.validate();
  return c;
}

inline RunConfig load_run_config(const fs::path& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot read config " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(f);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return run_config_from_json(j, path.parent_path().empty() ? fs::path(".") : path.parent_path());
}

/// The resolved configuration, echoed next to the outputs.
inline nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json d = nlohmann::json::object();
  if (c.dataset.synthetic) d["synthetic"] = data::to_json(*c.dataset.synthetic);
  if (!c.dataset.archive.image_index.empty()) d["image_index"] = c.dataset.archive.image_index.string();
  if (!c.dataset.archive.image_dir.empty()) d["image_dir"] = c.dataset.archive.image_dir.string();
  if (!c.dataset.archive.radiometer.empty()) d["radiometer"] = c.dataset.archive.radiometer.string();
  return {{"seed", c.seed},
          {"output_dir", c.output_dir.string()},
          {"dataset", d},
          {"filter",
           {{"night_start_hour", c.filter.night_start_hour},
            {"night_end_hour", c.filter.night_end_hour},
            {"min_irradiance_wm2", c.filter.min_irradiance_wm2},
            {"utc_offset_minutes", c.filter.utc_offset_minutes}}},
          {"backbone", model::to_json(c.backbone)},
          {"decoder", model::to_json(c.decoder)},
          {"training", training::to_json(c.training)},
          {"explain", explain::to_json(c.explain)},
          {"eval", {{"density_bins", c.eval.density_bins}}}};
}

}  // namespace skycast::cli
