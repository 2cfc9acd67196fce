// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The skycast Authors
#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "skycast/dataset/augment.hpp"
#include "skycast/json_util.hpp"
#include "skycast/numcore/optim.hpp"
#include "skycast/training/losses.hpp"

namespace skycast::training {

using numcore::ScheduleKind;

inline ScheduleKind parse_schedule(const std::string& s) {
  if (s == "cosine_anneal") return ScheduleKind::cosine_anneal;
  if (s == "exp_warmup_then_cosine") return ScheduleKind::exp_warmup_then_cosine;
  throw ConfigError("unknown schedule '" + s + "'");
}

inline const char* schedule_name(ScheduleKind k) {
  return k == ScheduleKind::cosine_anneal ? "cosine_anneal" : "exp_warmup_then_cosine";
}

/// One training stage. Stages 2 and 3 share a single learning-rate schedule
/// spanning both; the stage-3 plan's lr and schedule fields are ignored.
struct StagePlan {
  int stage = 1;
  std::size_t epochs = 11;
  std::size_t batch_size = 64;
  double lr = 1e-4;
  ScheduleKind schedule = ScheduleKind::cosine_anneal;
  double warmup_fraction = 0.05;
  double min_lr = 0.0;

  void validate() const {
    if (stage < 1 || stage > 3) throw ConfigError("stage must be 1, 2 or 3");
    if (batch_size == 0) throw ConfigError("stage " + std::to_string(stage) + ": batch_size must be >= 1");
    if (!(lr > 0)) throw ConfigError("stage " + std::to_string(stage) + ": lr must be positive");
    if (warmup_fraction < 0 || warmup_fraction >= 1) throw ConfigError("warmup_fraction must lie in [0, 1)");
    if (min_lr < 0 || min_lr > lr) throw ConfigError("min_lr must lie in [0, lr]");
  }
};

struct TrainConfig {
  StagePlan stage1{1, 11, 64, 1e-4, ScheduleKind::cosine_anneal};
  StagePlan stage2{2, 10, 16, 5e-5, ScheduleKind::exp_warmup_then_cosine};
  StagePlan stage3{3, 1, 16, 5e-5, ScheduleKind::exp_warmup_then_cosine};
  LossWeights weights;
  IrradianceLoss irradiance_loss = IrradianceLoss::mse;
  std::size_t context = 5;
  std::size_t horizon = 3;
  double cadence_minutes = 5.0;
  double cadence_tolerance = 0.2;
  bool skip_stage1 = false;  // two-stage training: the decoder starts on an untrained backbone
  bool augment = true;
  data::AugmentRanges augment_ranges;
  numcore::AdamConfig adam;

  void validate() const {
    stage1.validate();
    stage2.validate();
    stage3.validate();
    if (stage1.stage != 1 || stage2.stage != 2 || stage3.stage != 3) throw ConfigError("stage plans out of order");
    weights.validate();
    if (context < 1 || horizon < 1) throw ConfigError("context and horizon must be >= 1");
    if (stage2.epochs + stage3.epochs == 0) throw ConfigError("stages 2 and 3 have no epochs");
  }
};

inline nlohmann::json to_json(const StagePlan& p) {
  return {{"epochs", p.epochs},
          {"batch_size", p.batch_size},
          {"lr", p.lr},
          {"schedule", schedule_name(p.schedule)},
          {"warmup_fraction", p.warmup_fraction},
          {"min_lr", p.min_lr}};
}

inline StagePlan stage_plan_from_json(const nlohmann::json& j, StagePlan p) {
  const std::string where = "training.stage" + std::to_string(p.stage);
  check_keys(j, {"epochs", "batch_size", "lr", "schedule", "warmup_fraction", "min_lr"}, where);
  read_opt(j, "epochs", p.epochs, where);
  read_opt(j, "batch_size", p.batch_size, where);
  read_opt(j, "lr", p.lr, where);
  if (j.contains("schedule")) p.schedule = parse_schedule(j.at("schedule").get<std::string>());
  read_opt(j, "warmup_fraction", p.warmup_fraction, where);
  read_opt(j, "min_lr", p.min_lr, where);
  p.validate();
  return p;
}

inline nlohmann::json to_json(const TrainConfig& c) {
  return {{"stage1", to_json(c.stage1)},
          {"stage2", to_json(c.stage2)},
          {"stage3", to_json(c.stage3)},
          {"loss_weights", to_json(c.weights)},
          {"irradiance_loss", irradiance_loss_name(c.irradiance_loss)},
          {"context", c.context},
          {"horizon", c.horizon},
          {"cadence_minutes", c.cadence_minutes},
          {"cadence_tolerance", c.cadence_tolerance},
          {"skip_stage1", c.skip_stage1},
          {"augment", c.augment},
          {"color_jitter", c.augment_ranges.jitter},
          {"max_rotation_deg", c.augment_ranges.max_rotation_deg},
          {"adam", {{"beta1", c.adam.beta1}, {"beta2", c.adam.beta2}, {"eps", c.adam.eps},
                    {"weight_decay", c.adam.weight_decay}}}};
}

inline TrainConfig train_config_from_json(const nlohmann::json& j) {
  check_keys(j, {"stage1", "stage2", "stage3", "loss_weights", "irradiance_loss", "context", "horizon",
                 "cadence_minutes", "cadence_tolerance", "skip_stage1", "augment", "color_jitter", "max_rotation_deg",
                 "adam"},
             "training");
  TrainConfig c;
  if (j.contains("stage1")) c.stage1 = stage_plan_from_json(j["stage1"], c.stage1);
  if (j.contains("stage2")) c.stage2 = stage_plan_from_json(j["stage2"], c.stage2);
  if (j.contains("stage3")) c.stage3 = stage_plan_from_json(j["stage3"], c.stage3);
  if (j.contains("loss_weights")) c.weights = loss_weights_from_json(j["loss_weights"]);
  if (j.contains("irradiance_loss")) c.irradiance_loss = parse_irradiance_loss(j["irradiance_loss"].get<std::string>());
  read_opt(j, "context", c.context, "training");
  read_opt(j, "horizon", c.horizon, "training");
  read_opt(j, "cadence_minutes", c.cadence_minutes, "training");
  read_opt(j, "cadence_tolerance", c.cadence_tolerance, "training");
  read_opt(j, "skip_stage1", c.skip_stage1, "training");
  read_opt(j, "augment", c.augment, "training");
  read_opt(j, "color_jitter", c.augment_ranges.jitter, "training");
  read_opt(j, "max_rotation_deg", c.augment_ranges.max_rotation_deg, "training");
  if (j.contains("adam")) {
    const auto& a = j["adam"];
    check_keys(a, {"beta1", "beta2", "eps", "weight_decay"}, "training.adam");
    read_opt(a, "beta1", c.adam.beta1, "training.adam");
    read_opt(a, "beta2", c.adam.beta2, "training.adam");
    read_opt(a, "eps", c.adam.eps, "training.adam");
    read_opt(a, "weight_decay", c.adam.weight_decay, "training.adam");
    numcore::AdamState<float> probe(c.adam);
  }
  c.validate();
  return c;
}

}  // namespace skycast::training
