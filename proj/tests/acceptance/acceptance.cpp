// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The skycast Authors
//
// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails. Pass criterion numbers to run a subset.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "grad_check.hpp"
#include "skycast/cli.hpp"

using namespace skycast;
namespace fs = std::filesystem;
using numcore::Tensor;

#ifndef SKYCAST_SOURCE_DIR
#error "SKYCAST_SOURCE_DIR must be defined"
#endif
#ifndef SKYCAST_WORK_DIR
#error "SKYCAST_WORK_DIR must be defined"
#endif

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

fs::path work_dir(const std::string& name) {
  const auto d = fs::path(SKYCAST_WORK_DIR) / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

cli::RunConfig tiny_config(std::uint64_t seed, const fs::path& out) {
  auto c = cli::load_run_config(fs::path(SKYCAST_SOURCE_DIR) / "configs" / "tiny.json");
  c.seed = seed;
  c.output_dir = out;
  return c;
}

// 1. Forecast-skill reference values.
Outcome metric_oracle() {
  const double a = metrics::forecast_skill(112.0, 142.58);
  const double b = metrics::forecast_skill(139.71, 241.04);
  const bool ok = std::abs(a - 21.45) <= 0.01 && std::abs(b - 42.04) <= 0.01;
  return {ok, fmt("FS(112, 142.58) = %.4f %%", a) + fmt(", FS(139.71, 241.04) = %.4f %%", b)};
}

// 2. Smart persistence against a long-double oracle, plus the index-1 case.
Outcome smart_persistence_exact() {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> y(0.0, 1200.0), cs(1.0, 1200.0);
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    const double yt = y(rng), c0 = cs(rng), c1 = cs(rng);
    const long double ref = static_cast<long double>(yt) / c0 * c1;
    const double got = clearsky::smart_persistence(yt, c0, c1);
    worst = std::max(worst, static_cast<double>(std::abs((got - ref) / std::max(ref, 1e-300L))));
  }
  bool identity = true;
  for (int i = 0; i < 1000; ++i) {
    const double c0 = cs(rng), c1 = cs(rng);
    identity = identity && clearsky::smart_persistence(c0, c0, c1) == c1;
  }
  const bool ok = worst <= 4 * std::numeric_limits<double>::epsilon() && identity;
  return {ok, fmt("max relative error %.3g over 1000 triples", worst) + (identity ? ", index-1 exact" : ", index-1 broken")};
}

// 3. Perturbing decoder input j leaves every earlier output row bitwise equal.
Outcome decoder_causality() {
  numcore::ParamSet<float> ps;
  std::mt19937_64 rng(3);
  const std::size_t s = 8, d = 64;
  model::CausalDecoder<float> dec(model::DecoderConfig::tiny(), d, ps, rng);
  std::uniform_real_distribution<float> u(-2, 2);
  std::size_t violations = 0, moved = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<float> z(s * d);
    for (auto& v : z) v = u(rng);
    const auto base = dec.decode(Tensor<float>({s, d}, z)).values();
    const std::size_t j = rng() % s;
    for (std::size_t c = 0; c < d; ++c) z[j * d + c] += u(rng);
    const auto pert = dec.decode(Tensor<float>({s, d}, z)).values();
    for (std::size_t i = 0; i < j * d; ++i) violations += base[i] != pert[i];
    bool changed = false;
    for (std::size_t i = j * d; i < (j + 1) * d; ++i) changed = changed || base[i] != pert[i];
    moved += changed;
  }
  return {violations == 0 && moved == 100,
          std::to_string(violations) + " earlier-row changes, own row moved in " + std::to_string(moved) + "/100 trials"};
}

// 4. Central finite differences for every primitive and a composed model.
Outcome gradient_suite() {
  using skycast::testing::finite_difference_check;
  using skycast::testing::random_tensor;
  using T = double;
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(4);
  const T h = 1e-5;
  std::vector<skycast::testing::GradReport> all;
  auto record = [&](std::vector<skycast::testing::GradReport> r, const std::string& op) {
    for (auto& x : r) x.name = op + "/" + x.name, all.push_back(x);
  };
  using namespace numcore;
  {
    auto a = random_tensor<T>({3, 4}, rng), b = random_tensor<T>({4, 2}, rng), w = random_tensor<T>({3, 2}, rng, -1, 1, false);
    record(finite_difference_check<T>([&] { return sum(mul(matmul(a, b), w)); }, {{"a", a}, {"b", b}}, h), "matmul");
  }
  {
    auto x = random_tensor<T>({3, 5}, rng), w = random_tensor<T>({5, 4}, rng), b = random_tensor<T>({4}, rng);
    auto c = random_tensor<T>({3, 4}, rng, -1, 1, false);
    record(finite_difference_check<T>([&] { return sum(mul(linear(x, w, b), c)); }, {{"x", x}, {"w", w}, {"b", b}}, h), "linear");
  }
  {
    auto x = random_tensor<T>({2, 6}, rng, -3, 3), c = random_tensor<T>({2, 6}, rng, -1, 1, false);
    record(finite_difference_check<T>([&] { return sum(mul(gelu(x), c)); }, {{"x", x}}, h), "gelu");
  }
  {
    auto x = random_tensor<T>({3, 6}, rng, -2, 2), g = random_tensor<T>({6}, rng), b = random_tensor<T>({6}, rng);
    auto c = random_tensor<T>({3, 6}, rng, -1, 1, false);
    record(finite_difference_check<T>([&] { return sum(mul(layer_norm(x, g, b, T(1e-5)), c)); },
                                   {{"x", x}, {"gain", g}, {"bias", b}}, h),
        "layer_norm");
  }
  {
    auto x = random_tensor<T>({2, 3, 4}, rng, -2, 2), c = random_tensor<T>({2, 3, 4}, rng, -1, 1, false);
    for (std::size_t axis = 0; axis < 3; ++axis)
      record(finite_difference_check<T>([&] { return sum(mul(softmax(x, axis), c)); }, {{"x", x}}, h), "softmax");
  }
  for (bool causal : {false, true}) {
    auto q = random_tensor<T>({3, 4}, rng, -2, 2), k = random_tensor<T>({3, 4}, rng, -2, 2), v = random_tensor<T>({3, 4}, rng);
    auto c = random_tensor<T>({3, 4}, rng, -1, 1, false);
    record(finite_difference_check<T>([&] { return sum(mul(scaled_dot_product_attention(q, k, v, 2, causal).output, c)); },
                                   {{"q", q}, {"k", k}, {"v", v}}, h),
        causal ? "causal_attention" : "attention");
  }
  {
    auto x = random_tensor<T>({4, 5, 6}, rng), w = random_tensor<T>({3, 6, 3, 3}, rng), b = random_tensor<T>({3}, rng);
    auto c = random_tensor<T>({4, 5, 3}, rng, -1, 1, false);
    record(finite_difference_check<T>([&] { return sum(mul(conv2d_same(x, w, b), c)); }, {{"x", x}, {"w", w}, {"b", b}}, h),
        "conv2d");
  }
  {
    auto p = random_tensor<T>({7}, rng), t = random_tensor<T>({7}, rng);
    record(finite_difference_check<T>([&] { return mse_loss(p, t); }, {{"pred", p}, {"target", t}}, h), "mse");
    record(finite_difference_check<T>([&] { return mae_loss(p, t); }, {{"pred", p}, {"target", t}}, h), "mae");
  }
  {
    auto a = random_tensor<T>({2, 3}, rng), b = random_tensor<T>({1, 3}, rng), c = random_tensor<T>({2, 3}, rng, -1, 1, false);
    record(finite_difference_check<T>(
            [&] {
              auto sl = slice_rows(concat_rows<T>({b, a}), 1, 2);
              auto g = gather(reshape(sl, {6}), {5, 4, 3, 2, 1, 0}, {2, 3});
              return mean(mul(sub(g, scale(a, T(0.5))), c));
            },
            {{"a", a}, {"b", b}}, h),
        "rows/gather/reshape/scale/sub/mean");
  }

  // One ViT block and one decoder block, composite loss through a 2-step unroll.
  model::Forecaster<T> m({4, 2, 8, 1, 2, 4.0, false}, {8, 1, 2, 8, 4.0}, 3);
  {
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (auto& p : m.params().items())
      for (auto& v : p.tensor.mutable_data()) v = u(rng);
  }
  std::vector<data::Image> frames;
  for (int i = 0; i < 5; ++i) {
    data::Image img(4, 4, 3);
    for (auto& v : img.pixels) v = static_cast<float>(std::uniform_real_distribution<double>(0, 1)(rng));
    frames.push_back(img);
  }
  const std::vector<T> y{0.3, -0.2, 0.8, 0.1, -0.5};
  const std::size_t s = 3, k = 2;
  std::vector<Tensor<T>> zt;
  {
    NoGradGuard ng;
    for (std::size_t i = 1; i < s + k; ++i) zt.push_back(m.encode({frames[i]}).z);
  }
  const auto z_true = concat_rows(zt);
  auto loss_fn = [&]() {
    std::vector<Tensor<T>> z;
    for (std::size_t i = 0; i < s; ++i) z.push_back(m.encode({frames[i]}).z);
    auto b = model::unroll(m.decoder(), m.irradiance_head(), concat_rows(z), k);
    auto l = training::sequence_loss(b, z_true, y, training::LossWeights{}, training::IrradianceLoss::mse);
    return add(l.total, mse_loss(m.regress({frames[0]}), Tensor<T>({1, 1}, {y[0]})));
  };
  std::vector<std::pair<std::string, Tensor<T>>> inputs;
  for (auto& p : m.params().items()) inputs.emplace_back(p.name, p.tensor);
  record(finite_difference_check<T>(loss_fn, inputs, 1e-6), "model");

  // Gradients that are exactly zero analytically (e.g. key biases) are
  // judged on an absolute floor; everything else on relative error.
  double worst = 0;
  std::string worst_name;
  std::size_t failed = 0;
  for (const auto& r : all) {
    if (!r.passed(1e-6, 1e-10)) ++failed;
    if (r.abs_error >= 1e-10 && r.rel_error > worst) worst = r.rel_error, worst_name = r.name;
  }
  const double secs = seconds_since(t0);
  return {failed == 0 && secs < 60,
          std::to_string(all.size()) + " gradients, " + std::to_string(failed) + " failed, worst rel " +
              fmt("%.2g", worst) + " (" + worst_name + ")" + fmt(", %.1f s", secs)};
}

// 5. Full-size shapes.
Outcome shape_suite() {
  numcore::ParamSet<float> ps;
  std::mt19937_64 rng(5);
  const auto cfg = model::BackboneConfig::full();
  model::ViTBackbone<float> vit(cfg, ps, rng, "backbone");
  const auto enc = vit.encode(Tensor<float>::zeros({224, 224, 3}), true);
  const auto adapter = model::ExposureAdapter<float>::make(ps, "adapter");
  const auto adapted = adapter(Tensor<float>::zeros({224, 224, 6}));
  const bool ok = cfg.token_count() == 197 && enc.z.shape() == numcore::Shape{1, 768} &&
                  enc.attention.size() == 12 && enc.attention.back().shape() == numcore::Shape{12, 197, 197} &&
                  adapted.shape() == numcore::Shape{224, 224, 3};
  return {ok, std::to_string(cfg.token_count()) + " tokens, z " + numcore::shape_str(enc.z.shape()) + ", adapter " +
                  numcore::shape_str(adapted.shape())};
}

// 6. Filtering, splitting and normalization on an archive with planted
// violations.
Outcome pipeline_suite() {
  const auto dir = work_dir("pipeline");
  std::vector<data::ImageRecord> images;
  std::vector<data::RadiometerReading> series;
  data::Image png(4, 4, 3, 0.5f);
  std::size_t planted_night = 0, planted_low = 0, clean = 0;
  std::map<std::string, std::size_t> expect_split;  // by split name
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> ghi(50, 900);
  for (unsigned day = 1; day <= 20; ++day)
    for (int hour : {0, 1, 2, 3, 6, 9, 12, 15, 18, 23})
      for (int minute : {0, 30}) {
        char stamp[32];
        std::snprintf(stamp, sizeof stamp, "2023-06-%02uT%02d:%02d:00Z", day, hour, minute);
        const auto ts = data::parse_timestamp(stamp);
        const auto path = dir / "images" / ("sky_" + data::compact_timestamp(ts) + ".png");
        data::write_png(png, path);
        images.push_back({ts, {path.string()}});
        const bool night = hour < 3;
        const bool low = !night && hour == 18 && minute == 30;
        const double value = night ? ghi(rng) : low ? 1.5 : ghi(rng);
        const double t = data::epoch_seconds(ts);
        for (int s = 0; s < 30; ++s) series.push_back({t + s, value});
        if (night) ++planted_night;
        else if (low) ++planted_low;
        else {
          ++clean;
          ++expect_split[day >= 5 && day <= 9 ? "test" : day >= 15 && day <= 19 ? "val" : "train"];
        }
      }
  data::write_image_index_csv(images, dir / "index.csv");
  data::write_radiometer_csv(series, dir / "ghi.csv");
  data::ArchiveSource src;
  src.image_index = dir / "index.csv";
  src.radiometer = dir / "ghi.csv";
  const auto rep = data::prepare_dataset(src, {}, dir / "prepared");

  bool split_days_ok = true;
  for (auto s : {data::Split::train, data::Split::val, data::Split::test})
    for (const auto& smp : data::read_manifest(data::manifest_path(dir / "prepared", s))) {
      const unsigned d = data::local_time(smp.timestamp).day;
      const auto want = d >= 5 && d <= 9 ? data::Split::test : d >= 15 && d <= 19 ? data::Split::val : data::Split::train;
      split_days_ok = split_days_ok && want == s && data::local_time(smp.timestamp).hour >= 3 && smp.irradiance_wm2 >= 2;
    }
  const auto train = data::read_manifest(data::manifest_path(dir / "prepared", data::Split::train));
  double mean = 0, var = 0;
  for (const auto& s : train) mean += rep.stats.normalize(s.irradiance_wm2);
  mean /= static_cast<double>(train.size());
  for (const auto& s : train) var += std::pow(rep.stats.normalize(s.irradiance_wm2) - mean, 2);
  const double sd = std::sqrt(var / static_cast<double>(train.size()));

  const bool ok = rep.filter.removed_night == planted_night && rep.filter.removed_low_irradiance == planted_low &&
                  rep.filter.kept == clean && rep.train == expect_split["train"] && rep.val == expect_split["val"] &&
                  rep.test == expect_split["test"] && split_days_ok && std::abs(mean) <= 1e-6 && std::abs(sd - 1) <= 1e-6;
  return {ok, "removed night " + std::to_string(rep.filter.removed_night) + "/" + std::to_string(planted_night) +
                  ", low " + std::to_string(rep.filter.removed_low_irradiance) + "/" + std::to_string(planted_low) +
                  ", split " + std::to_string(rep.train) + "/" + std::to_string(rep.val) + "/" + std::to_string(rep.test) +
                  fmt(", normalized mean %.2g", mean) + fmt(" std %.9f", sd)};
}

struct TinyRun {
  metrics::EvalReport report;
  double seconds = 0;
  std::size_t sequences = 0;
};

TinyRun tiny_run(std::uint64_t seed, const fs::path& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto c = tiny_config(seed, out);
  cli::cmd_prepare(c);
  cli::cmd_train(c, {1, 2, 3});
  TinyRun r;
  r.report = cli::cmd_eval(c, training::Reference::smart_persistence, 3);
  r.seconds = seconds_since(t0);
  const auto opt = c.sequence_options();
  for (auto s : {data::Split::train, data::Split::val, data::Split::test})
    r.sequences += data::make_sequences(data::read_manifest(data::manifest_path(c.prepared_dir(), s)), opt).size();
  return r;
}

std::map<std::uint64_t, TinyRun> g_runs;

// 7. Three seeds of the tiny configuration beat smart persistence at k = 3.
Outcome desk_scale() {
  bool ok = true;
  std::string detail;
  for (std::uint64_t seed : {0, 1, 2}) {
    const auto r = tiny_run(seed, work_dir("tiny_seed" + std::to_string(seed)));
    g_runs[seed] = r;
    const double fs = r.report.final_step().fs_pct;
    ok = ok && fs > 0 && r.seconds < 600 && r.sequences >= 2000;
    char buf[96];
    std::snprintf(buf, sizeof buf, "%sseed %llu FS %.2f %% in %.0f s", detail.empty() ? "" : "; ",
                  static_cast<unsigned long long>(seed), fs, r.seconds);
    detail += buf;
  }
  detail += "; " + std::to_string(g_runs[0].sequences) + " sequences";
  return {ok, detail};
}

// 8. Paired-seed ablation: three-stage vs two-stage, full loss vs final-only.
Outcome ablation_harness() {
  const auto out = work_dir("ablation");
  const auto c = tiny_config(0, out);
  cli::cmd_prepare(c);
  auto points = training::ablation_grid("loss-components", c.training);
  const auto stages = training::ablation_grid("stages", c.training);
  points.push_back(stages[1]);
  cli::AblationDataCache cache(c);
  const auto rows = training::run_ablation<float>(
      "acceptance", points, {0, 1, 2}, c.backbone, c.decoder,
      [&](std::size_t s, std::size_t k) -> const training::AblationData& { return cache(s, k); });
  training::write_ablation_csv(rows, out / "ablation.csv");

  std::map<std::string, std::pair<double, double>> mean;  // label -> (fs, mae)
  std::map<std::string, double> rmse;
  for (const auto& [label, fs] : training::mean_fs_by_label(rows)) mean[label].first = fs;
  for (const auto& r : rows) {
    mean[r.point.label].second += r.report.final_step().mae_wm2 / 3.0;
    rmse[r.point.label] += r.report.final_step().rmse_wm2 / 3.0;
  }
  std::printf("    %-28s %12s %12s %8s\n", "Loss components", "RMSE (W/m2)", "MAE (W/m2)", "FS (%)");
  for (const auto& p : training::ablation_grid("loss-components", c.training))
    std::printf("    %-28s %12.2f %12.2f %8.2f\n", p.label.c_str(), rmse[p.label], mean[p.label].second, mean[p.label].first);
  std::printf("    %-28s %12.2f %12.2f %8.2f\n", "two-stage (full loss)", rmse["two-stage"], mean["two-stage"].second,
              mean["two-stage"].first);
  std::printf("    per seed:");
  for (const auto& r : rows) std::printf(" [%s s%llu %.2f]", r.point.label.c_str(), static_cast<unsigned long long>(r.seed),
                                         r.report.final_step().fs_pct);
  std::printf("\n");

  const double full = mean["L_irr,f + L_irr,i + L_enc"].first;
  const double final_only = mean["L_irr,f"].first;
  const double two = mean["two-stage"].first;
  const bool ok = full >= two && full >= final_only;
  return {ok, fmt("mean FS three-stage %.2f %%", full) + fmt(" vs two-stage %.2f %%", two) +
                  fmt("; full loss %.2f %%", full) + fmt(" vs L_irr,f only %.2f %%", final_only)};
}

// 9. Rollout against an explicit product of residual-normalized matrices.
Outcome rollout_oracle() {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  const std::size_t heads = 3, n = 17;
  double worst = 0;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Tensor<double>> layers;
    std::vector<std::vector<double>> fused;
    for (int l = 0; l < 3; ++l) {
      std::vector<double> v(heads * n * n);
      for (std::size_t r = 0; r < heads * n; ++r) {
        double s = 0;
        for (std::size_t c = 0; c < n; ++c) s += v[r * n + c] = u(rng);
        for (std::size_t c = 0; c < n; ++c) v[r * n + c] /= s;
      }
      layers.emplace_back(numcore::Shape{heads, n, n}, v);
      std::vector<double> a(n * n);
      for (std::size_t i = 0; i < n; ++i) {
        double row = 0;
        for (std::size_t j = 0; j < n; ++j) {
          double m = 0;
          for (std::size_t h = 0; h < heads; ++h) m += v[(h * n + i) * n + j];
          a[i * n + j] = m / heads + (i == j);
          row += a[i * n + j];
        }
        for (std::size_t j = 0; j < n; ++j) a[i * n + j] /= row;
      }
      fused.push_back(a);
    }
    std::vector<double> r(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) r[i * n + i] = 1;
    for (const auto& a : fused) {
      std::vector<double> next(n * n, 0.0);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t p = 0; p < n; ++p)
          for (std::size_t j = 0; j < n; ++j) next[i * n + j] += a[i * n + p] * r[p * n + j];
      r = next;
    }
    const auto got = explain::rollout_matrix(layers, {explain::HeadFusion::mean, 0.0});
    for (std::size_t i = 0; i < n * n; ++i) worst = std::max(worst, std::abs(got.v[i] - r[i]));
  }
  std::vector<double> eye(heads * n * n, 0.0);
  for (std::size_t h = 0; h < heads; ++h)
    for (std::size_t i = 0; i < n; ++i) eye[(h * n + i) * n + i] = 1;
  const Tensor<double> id({heads, n, n}, eye);
  const auto ri = explain::rollout_matrix<double>({id, id, id}, {explain::HeadFusion::mean, 0.0});
  bool identity = true;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) identity = identity && ri.at(i, j) == (i == j ? 1.0 : 0.0);
  return {worst <= 1e-6 && identity,
          fmt("max abs deviation %.2g on 20 random 3-layer stacks", worst) + (identity ? ", identity exact" : ", identity broken")};
}

// 10. Two trainings with the same seed give byte-identical checkpoints and
// reports.
Outcome determinism() {
  if (!g_runs.count(0)) g_runs[0] = tiny_run(0, work_dir("tiny_seed0"));
  const auto again = work_dir("tiny_seed0_repeat");
  tiny_run(0, again);
  const auto first = fs::path(SKYCAST_WORK_DIR) / "tiny_seed0";
  std::vector<std::string> differ;
  for (const char* f : {"checkpoints/stage1.ckpt", "checkpoints/stage2.ckpt", "checkpoints/stage3.ckpt",
                        "eval/smart_k3/report.json", "eval/smart_k3/report.csv", "eval/smart_k3/predictions.csv"})
    if (numcore::read_file_bytes(first / f) != numcore::read_file_bytes(again / f)) differ.push_back(f);
  std::string detail = differ.empty() ? "3 checkpoints and 3 report files identical" : "differ:";
  for (const auto& d : differ) detail += " " + d;
  return {differ.empty(), detail};
}

}  // namespace

int main(int argc, char** argv) {
  log_level() = LogLevel::quiet;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"metric oracle", metric_oracle},
      {"smart persistence exactness", smart_persistence_exact},
      {"decoder causality", decoder_causality},
      {"gradient suite", gradient_suite},
      {"shape suite", shape_suite},
      {"pipeline suite", pipeline_suite},
      {"desk-scale learning", desk_scale},
      {"ablation harness", ablation_harness},
      {"rollout oracle", rollout_oracle},
      {"determinism", determinism},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::stoi(argv[i]));
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %2d %s  %s: %s [%.1f s]\n", id, o.pass ? "PASS" : "FAIL", criteria[i].first, o.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
