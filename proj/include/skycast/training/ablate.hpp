// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The skycast Authors
#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "skycast/metrics/metrics.hpp"
#include "skycast/numcore/checkpoint.hpp"
#include "skycast/training/trainer.hpp"

namespace skycast::training {

/// One configuration of an ablation grid.
struct AblationPoint {
  std::string label;
  TrainConfig config;
  bool backbone_persistence = false;  // row scores the stage-1 model shifted forward instead
};

inline const std::vector<std::string>& ablation_grid_names() {
  static const std::vector<std::string> names{"loss-components", "context", "training-loss", "stages", "backbone"};
  return names;
}

/// Rows of a named grid derived from `base`. The empty name gives no rows.
inline std::vector<AblationPoint> ablation_grid(const std::string& name, const TrainConfig& base) {
  std::vector<AblationPoint> out;
  auto with = [&](std::string label, auto edit) {
    AblationPoint p{std::move(label), base};
    edit(p.config);
    out.push_back(std::move(p));
  };
  if (name.empty()) return out;
  if (name == "loss-components") {
    with("L_irr,f", [](TrainConfig& c) { c.weights = {1, 0, 0}; });
    with("L_irr,f + L_enc", [](TrainConfig& c) { c.weights = {1, 0, 1}; });
    with("L_irr,f + L_irr,i", [](TrainConfig& c) { c.weights = {1, 1, 0}; });
    with("L_irr,f + L_irr,i + L_enc", [](TrainConfig& c) { c.weights = {1, 1, 1}; });
  } else if (name == "context") {
    for (std::size_t s : {2, 3, 5, 7, 9})
      with("s=" + std::to_string(s), [s](TrainConfig& c) {
        c.context = s;
        c.horizon = 3;
      });
  } else if (name == "training-loss") {
    with("mse", [](TrainConfig& c) { c.irradiance_loss = IrradianceLoss::mse; });
    with("mae", [](TrainConfig& c) { c.irradiance_loss = IrradianceLoss::mae; });
  } else if (name == "stages") {
    with("three-stage", [](TrainConfig& c) { c.skip_stage1 = false; });
    with("two-stage", [](TrainConfig& c) { c.skip_stage1 = true; });
  } else if (name == "backbone") {
    with("vit+decoder", [](TrainConfig& c) { c.skip_stage1 = false; });
    with("backbone_persistence", [](TrainConfig& c) { c.skip_stage1 = false; });
    out.back().backbone_persistence = true;
  } else {
    throw ConfigError("unknown ablation grid '" + name + "'");
  }
  return out;
}

struct AblationRow {
  std::string grid;
  AblationPoint point;
  std::uint64_t seed = 0;
  metrics::EvalReport report;  // against smart persistence on the test split
};

/// Data for one sequence geometry: training/validation sets and the test
/// split, all built with the given context and horizon.
struct AblationData {
  TrainData train;
  FrameSet test;
};

using AblationDataFn = std::function<const AblationData&(std::size_t context, std::size_t horizon)>;

/// Trains and evaluates every point for every seed. Stage 1 depends only on
/// the seed and the stage-1 settings, so its result is shared between rows.
template <typename T>
std::vector<AblationRow> run_ablation(const std::string& grid, const std::vector<AblationPoint>& points,
                                      const std::vector<std::uint64_t>& seeds, const model::BackboneConfig& bcfg,
                                      const model::DecoderConfig& dcfg, const AblationDataFn& data_for) {
  std::vector<AblationRow> rows;
  std::map<std::string, std::vector<numcore::ArrayRecord>> stage1_cache;
  for (auto seed : seeds)
    for (const auto& pt : points) {
      const auto& c = pt.config;
      const auto& d = data_for(c.context, c.horizon);
      model::Forecaster<T> m(bcfg, dcfg, seed);
      std::vector<numcore::ArrayRecord> stage1;
      if (!c.skip_stage1) {
        const std::string key = std::to_string(seed) + "|" + to_json(c.stage1).dump() + "|" +
                                irradiance_loss_name(c.irradiance_loss) + "|" + std::to_string(c.augment);
        auto it = stage1_cache.find(key);
        if (it == stage1_cache.end()) {
          train_stage1(m, d.train, c, seed);
          it = stage1_cache.emplace(key, numcore::to_records(m.params())).first;
        }
        stage1 = it->second;
        numcore::load_records(m.params(), stage1);
      }
      train_stage2(m, d.train, c, seed);
      train_stage3(m, d.train, c, seed);

      AblationRow row{grid, pt, seed, {}};
      auto sp = predict(m, d.test, d.test.sequences, d.train.stats, Reference::smart_persistence, d.train.clear_sky);
      if (pt.backbone_persistence) {
        model::Forecaster<T> s1(bcfg, dcfg, seed);
        numcore::load_records(s1.params(), stage1);
        const auto bp = predict(m, d.test, d.test.sequences, d.train.stats, Reference::backbone_persistence,
                                d.train.clear_sky, &s1);
        sp.model = bp.reference;
      }
      row.report = metrics::evaluate(sp, d.train.stats.mean_wm2, pt.backbone_persistence ? "backbone_persistence" : "model",
                                     reference_name(Reference::smart_persistence));
      char buf[200];
      std::snprintf(buf, sizeof buf, "ablation %s [%s] seed %llu: fs %.2f %%", grid.c_str(), pt.label.c_str(),
                    static_cast<unsigned long long>(seed), row.report.final_step().fs_pct);
      log_info(buf);
      rows.push_back(std::move(row));
    }
  return rows;
}

/// One line per row with the final-step metrics.
inline void write_ablation_csv(const std::vector<AblationRow>& rows, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw InputError("cannot write " + path.string());
  f << "grid,label,seed,context,horizon,alpha,beta,gamma,irradiance_loss,stages,step,sample_count,mae_wm2,rmse_wm2,"
       "nrmse_pct,fs_pct,reference\n";
  char buf[512];
  for (const auto& r : rows) {
    const auto& c = r.point.config;
    const auto& h = r.report.final_step();
    std::snprintf(buf, sizeof buf, "%s,\"%s\",%llu,%zu,%zu,%g,%g,%g,%s,%d,%zu,%zu,%.4f,%.4f,%.4f,%.4f,%s\n",
                  r.grid.c_str(), r.point.label.c_str(), static_cast<unsigned long long>(r.seed), c.context, c.horizon,
                  c.weights.alpha, c.weights.beta, c.weights.gamma, irradiance_loss_name(c.irradiance_loss),
                  c.skip_stage1 ? 2 : 3, h.step, r.report.sample_count, h.mae_wm2, h.rmse_wm2, h.nrmse_pct, h.fs_pct,
                  h.reference_name.c_str());
    f << buf;
  }
}

/// Mean final-step FS per label over seeds, in first-seen order.
inline std::vector<std::pair<std::string, double>> mean_fs_by_label(const std::vector<AblationRow>& rows) {
  std::vector<std::pair<std::string, double>> out;
  std::map<std::string, std::pair<double, std::size_t>> acc;
  for (const auto& r : rows) {
    if (!acc.count(r.point.label)) out.push_back({r.point.label, 0});
    auto& a = acc[r.point.label];
    a.first += r.report.final_step().fs_pct;
    ++a.second;
  }
  for (auto& [label, v] : out) v = acc[label].first / static_cast<double>(acc[label].second);
  return out;
}

}  // namespace skycast::training
