// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The skycast Authors
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <vector>

#include "skycast/dataset/augment.hpp"
#include "skycast/log.hpp"
#include "skycast/training/config.hpp"
#include "skycast/training/evaluate.hpp"

namespace skycast::training {

/// One row of the per-epoch log. Validation metrics refer to single-frame
/// regression in stage 1 and to the final forecast step otherwise; FS is
/// against smart persistence and NaN in stage 1.
struct EpochRecord {
  int stage = 0;
  std::size_t epoch = 0;
  std::size_t steps = 0;
  double lr = 0;
  double train_loss = 0;
  double loss_final = 0, loss_intermediate = 0, loss_encoding = 0;
  double val_mae = NAN, val_rmse = NAN, val_nrmse = NAN, val_fs = NAN;
};

inline void write_epoch_csv(const std::vector<EpochRecord>& rows, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw InputError("cannot write " + path.string());
  f << "stage,epoch,steps,lr,train_loss,loss_final,loss_intermediate,loss_encoding,split,mae_wm2,rmse_wm2,nrmse_pct,"
       "fs_pct\n";
  char buf[512];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%zu,%zu,%.6e,%.6f,%.6f,%.6f,%.6f,val,%.4f,%.4f,%.4f,%.4f\n", r.stage, r.epoch,
                  r.steps, r.lr, r.train_loss, r.loss_final, r.loss_intermediate, r.loss_encoding, r.val_mae,
                  r.val_rmse, r.val_nrmse, r.val_fs);
    f << buf;
  }
}

namespace detail {

inline std::mt19937_64 stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(c)};
  return std::mt19937_64(seq);
}

inline std::vector<std::size_t> shuffled(std::size_t n, std::mt19937_64 rng) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    std::swap(order[i - 1], order[pick(rng)]);
  }
  return order;
}

inline std::size_t steps_per_epoch(std::size_t items, std::size_t batch) { return (items + batch - 1) / batch; }

inline std::vector<data::Image> augmented(const std::vector<data::Image>& imgs, const data::AugmentParams* p) {
  if (!p) return imgs;
  std::vector<data::Image> out;
  for (const auto& im : imgs) out.push_back(data::apply_augment(im, *p));
  return out;
}

template <typename T>
std::uint64_t image_path_digest(const model::Forecaster<T>& m) {
  return m.params().digest(model::kBackbonePrefix) ^ (m.params().digest(model::kAdapterPrefix) * 31);
}

template <typename T>
void freeze_all_but(model::Forecaster<T>& m, std::initializer_list<const char*> trainable) {
  m.params().set_frozen("", true);
  for (const char* p : trainable) m.params().set_frozen(p, false);
}

template <typename T>
void fill_val(EpochRecord& r, const model::Forecaster<T>& m, const TrainData& d, std::size_t horizon) {
  if (d.val.sequences.empty()) return;
  const auto rep = evaluate(m, d.val, d.val.sequences, d.stats, Reference::smart_persistence, d.clear_sky);
  const auto& h = rep.horizons.at(horizon - 1);
  r.val_mae = h.mae_wm2;
  r.val_rmse = h.rmse_wm2;
  r.val_nrmse = h.nrmse_pct;
  r.val_fs = h.fs_pct;
}

inline void log_epoch(const EpochRecord& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "stage %d epoch %zu: loss %.5f, val rmse %.2f W/m2, fs %.2f %%", r.stage, r.epoch,
                r.train_loss, r.val_rmse, r.val_fs);
  log_info(buf);
}

}  // namespace detail

/// Stage 1: backbone plus regression head map single frames to irradiance.
template <typename T>
std::vector<EpochRecord> train_stage1(model::Forecaster<T>& m, const TrainData& d, const TrainConfig& c,
                                      std::uint64_t seed) {
  c.validate();
  const auto& plan = c.stage1;
  if (d.train.size() == 0) throw ContractError("stage 1: empty training split");
  detail::freeze_all_but(m, {model::kBackbonePrefix, model::kAdapterPrefix, model::kStage1HeadPrefix});
  numcore::AdamState<T> adam(c.adam);
  const std::size_t n = d.train.size();
  const std::size_t spe = detail::steps_per_epoch(n, plan.batch_size);
  const auto sched = numcore::make_schedule(plan.schedule, plan.lr, plan.epochs * spe, plan.warmup_fraction, plan.min_lr);
  std::vector<EpochRecord> log;
  std::uint64_t step = 0;
  for (std::size_t epoch = 0; epoch < plan.epochs; ++epoch) {
    const auto order = detail::shuffled(n, detail::stream(seed, 1, epoch));
    EpochRecord rec{1, epoch + 1};
    double loss_sum = 0;
    for (std::size_t b0 = 0; b0 < n; b0 += plan.batch_size) {
      const std::size_t b1 = std::min(n, b0 + plan.batch_size);
      const T inv = T(1) / static_cast<T>(b1 - b0);
      m.params().zero_grad();
      for (std::size_t t = b0; t < b1; ++t) {
        const std::size_t i = order[t];
        data::AugmentParams ap;
        if (c.augment) {
          auto rng = detail::stream(seed, 101, epoch, i);
          ap = data::draw_augment_params(rng, c.augment_ranges);
        }
        const auto y = m.regress(detail::augmented(d.train.images[i], c.augment ? &ap : nullptr));
        const auto loss = loss_irr(y, Tensor<T>({1, 1}, {static_cast<T>(d.train.targets[i])}), c.irradiance_loss);
        loss_sum += static_cast<double>(loss.item());
        numcore::backward(numcore::scale(loss, inv));
      }
      rec.lr = numcore::schedule_lr(sched, step);
      numcore::adam_step(m.params(), adam, rec.lr);
      ++step;
    }
    rec.steps = step;
    rec.train_loss = rec.loss_final = loss_sum / static_cast<double>(n);
    if (d.val.size() > 0) {
      const auto vm = evaluate_regression(m, d.val, d.stats);
      rec.val_mae = vm.mae;
      rec.val_rmse = vm.rmse;
      rec.val_nrmse = vm.nrmse_pct;
    }
    detail::log_epoch(rec);
    log.push_back(rec);
  }
  m.params().zero_grad();
  return log;
}

/// Total optimizer steps of the shared stage-2/3 schedule.
inline std::uint64_t decoder_schedule_steps(const TrainConfig& c, std::size_t sequences) {
  return c.stage2.epochs * detail::steps_per_epoch(sequences, c.stage2.batch_size) +
         c.stage3.epochs * detail::steps_per_epoch(sequences, c.stage3.batch_size);
}

inline numcore::LrSchedule decoder_schedule(const TrainConfig& c, std::size_t sequences) {
  const auto& p = c.stage2;
  return numcore::make_schedule(p.schedule, p.lr, decoder_schedule_steps(c, sequences), p.warmup_fraction, p.min_lr);
}

/// Stage 2: the image path is frozen; decoder and irradiance head learn on
/// cached, unaugmented encodings. Throws if a frozen parameter changed.
template <typename T>
std::vector<EpochRecord> train_stage2(model::Forecaster<T>& m, const TrainData& d, const TrainConfig& c,
                                      std::uint64_t seed) {
  c.validate();
  const auto& plan = c.stage2;
  const auto& seqs = d.train.sequences;
  if (seqs.empty()) throw ContractError("stage 2: no training sequences");
  detail::freeze_all_but(m, {model::kDecoderPrefix, model::kIrradianceHeadPrefix});
  const auto frozen_before = detail::image_path_digest(m);
  const auto enc = encode_frames(m, d.train);
  numcore::AdamState<T> adam(c.adam);
  const auto sched = decoder_schedule(c, seqs.size());
  std::vector<EpochRecord> log;
  std::uint64_t step = 0;
  const std::size_t n = seqs.size();
  for (std::size_t epoch = 0; epoch < plan.epochs; ++epoch) {
    const auto order = detail::shuffled(n, detail::stream(seed, 2, epoch));
    EpochRecord rec{2, epoch + 1};
    double tot = 0, fin = 0, mid = 0, encl = 0;
    for (std::size_t b0 = 0; b0 < n; b0 += plan.batch_size) {
      const std::size_t b1 = std::min(n, b0 + plan.batch_size);
      const T inv = T(1) / static_cast<T>(b1 - b0);
      m.params().zero_grad();
      for (std::size_t t = b0; t < b1; ++t) {
        const auto& seq = seqs[order[t]];
        const std::size_t s = seq.context, k = seq.horizon;
        const auto ctx = take_rows(enc, seq.members, 0, s);
        const auto z_true = take_rows(enc, seq.members, 1, s + k - 1);
        std::vector<T> y;
        for (auto i : seq.members) y.push_back(static_cast<T>(d.train.targets[i]));
        const auto bundle = model::unroll(m.decoder(), m.irradiance_head(), ctx, k);
        const auto l = sequence_loss(bundle, z_true, y, c.weights, c.irradiance_loss);
        tot += static_cast<double>(l.total.item());
        fin += l.final;
        mid += l.intermediate;
        encl += l.encoding;
        numcore::backward(numcore::scale(l.total, inv));
      }
      rec.lr = numcore::schedule_lr(sched, step);
      numcore::adam_step(m.params(), adam, rec.lr);
      ++step;
    }
    const double nn = static_cast<double>(n);
    rec.steps = step;
    rec.train_loss = tot / nn;
    rec.loss_final = fin / nn;
    rec.loss_intermediate = mid / nn;
    rec.loss_encoding = encl / nn;
    detail::fill_val(rec, m, d, c.horizon);
    detail::log_epoch(rec);
    log.push_back(rec);
  }
  m.params().zero_grad();
  if (detail::image_path_digest(m) != frozen_before)
    throw ContractError("stage 2: frozen backbone parameters changed");
  return log;
}

/// Stage 3: everything on the forecasting path trains. Encoding targets
/// come from the current backbone without gradient; one set of augmentation
/// parameters is drawn per sequence.
template <typename T>
std::vector<EpochRecord> train_stage3(model::Forecaster<T>& m, const TrainData& d, const TrainConfig& c,
                                      std::uint64_t seed) {
  c.validate();
  const auto& plan = c.stage3;
  const auto& seqs = d.train.sequences;
  if (seqs.empty()) throw ContractError("stage 3: no training sequences");
  detail::freeze_all_but(m, {model::kBackbonePrefix, model::kAdapterPrefix, model::kDecoderPrefix,
                             model::kIrradianceHeadPrefix});
  const auto head_before = m.params().digest(model::kStage1HeadPrefix);
  numcore::AdamState<T> adam(c.adam);
  const auto sched = decoder_schedule(c, seqs.size());
  std::uint64_t step = c.stage2.epochs * detail::steps_per_epoch(seqs.size(), c.stage2.batch_size);
  std::vector<EpochRecord> log;
  const std::size_t n = seqs.size();
  for (std::size_t epoch = 0; epoch < plan.epochs; ++epoch) {
    const auto order = detail::shuffled(n, detail::stream(seed, 3, epoch));
    EpochRecord rec{3, epoch + 1};
    double tot = 0, fin = 0, mid = 0, encl = 0;
    for (std::size_t b0 = 0; b0 < n; b0 += plan.batch_size) {
      const std::size_t b1 = std::min(n, b0 + plan.batch_size);
      const T inv = T(1) / static_cast<T>(b1 - b0);
      m.params().zero_grad();
      for (std::size_t t = b0; t < b1; ++t) {
        const std::size_t si = order[t];
        const auto& seq = seqs[si];
        const std::size_t s = seq.context, k = seq.horizon;
        data::AugmentParams ap;
        if (c.augment) {
          auto rng = detail::stream(seed, 103, epoch, si);
          ap = data::draw_augment_params(rng, c.augment_ranges);
        }
        std::vector<Tensor<T>> ctx_rows, target_rows;
        for (std::size_t j = 0; j < s; ++j) {
          const auto z = m.encode(detail::augmented(d.train.images[seq.members[j]], c.augment ? &ap : nullptr)).z;
          ctx_rows.push_back(z);
          if (j > 0) target_rows.push_back(z.detach());
        }
        {
          numcore::NoGradGuard ng;
          for (std::size_t j = s; j < s + k; ++j)
            target_rows.push_back(m.encode(detail::augmented(d.train.images[seq.members[j]], c.augment ? &ap : nullptr)).z);
        }
        std::vector<T> y;
        for (auto i : seq.members) y.push_back(static_cast<T>(d.train.targets[i]));
        const auto bundle = model::unroll(m.decoder(), m.irradiance_head(), numcore::concat_rows(ctx_rows), k);
        const auto z_true = numcore::concat_rows(target_rows);
        const auto l = sequence_loss(bundle, z_true, y, c.weights, c.irradiance_loss);
        tot += static_cast<double>(l.total.item());
        fin += l.final;
        mid += l.intermediate;
        encl += l.encoding;
        numcore::backward(numcore::scale(l.total, inv));
      }
      rec.lr = numcore::schedule_lr(sched, step);
      numcore::adam_step(m.params(), adam, rec.lr);
      ++step;
    }
    const double nn = static_cast<double>(n);
    rec.steps = step;
    rec.train_loss = tot / nn;
    rec.loss_final = fin / nn;
    rec.loss_intermediate = mid / nn;
    rec.loss_encoding = encl / nn;
    detail::fill_val(rec, m, d, c.horizon);
    detail::log_epoch(rec);
    log.push_back(rec);
  }
  m.params().zero_grad();
  if (m.params().digest(model::kStage1HeadPrefix) != head_before)
    throw ContractError("stage 3: frozen regression head changed");
  return log;
}

template <typename T>
std::vector<EpochRecord> run_stage(int stage, model::Forecaster<T>& m, const TrainData& d, const TrainConfig& c,
                                   std::uint64_t seed) {
  switch (stage) {
    case 1: return train_stage1(m, d, c, seed);
    case 2: return train_stage2(m, d, c, seed);
    case 3: return train_stage3(m, d, c, seed);
  }
  throw ConfigError("stage must be 1, 2 or 3");
}

}  // namespace skycast::training
