// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The skycast Authors

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "skycast/dataset.hpp"

using namespace skycast;
using namespace skycast::data;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  auto d = fs::temp_directory_path() / ("skycast_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

Timestamp ts(const char* s) { return parse_timestamp(s); }

Sample sample_at(const char* iso, double y) {
  Sample s;
  s.timestamp = ts(iso);
  s.image_paths = {"img.png"};
  s.irradiance_wm2 = y;
  return s;
}

std::vector<Sample> contiguous(std::size_t n, double minutes = 5.0) {
  std::vector<Sample> out;
  const auto t0 = ts("2023-06-12T10:00:00Z");
  for (std::size_t i = 0; i < n; ++i) {
    Sample s;
    s.timestamp = t0 + std::chrono::seconds(static_cast<long>(std::lround(static_cast<double>(i) * minutes * 60)));
    s.image_paths = {"x.png"};
    s.irradiance_wm2 = 100.0 + static_cast<double>(i);
    out.push_back(s);
  }
  return out;
}

double align_one(const std::vector<double>& values_1hz) {
  std::vector<RadiometerReading> series;
  const double t0 = epoch_seconds(ts("2023-06-12T10:00:00Z"));
  for (std::size_t i = 0; i < values_1hz.size(); ++i) series.push_back({t0 + static_cast<double>(i), values_1hz[i]});
  auto r = align_radiometer({{ts("2023-06-12T10:00:00Z"), {"a.png"}}}, series, 30.0);
  EXPECT_EQ(r.samples.size(), 1u);
  return r.samples.empty() ? -1 : r.samples[0].irradiance_wm2;
}

}  // namespace

TEST(Time, RoundTripAndForms) {
  EXPECT_EQ(format_timestamp(ts("2016-06-21T12:34:56Z")), "2016-06-21T12:34:56Z");
  EXPECT_EQ(ts("2016-06-21 12:34:56"), ts("20160621123456"));
  EXPECT_THROW(ts("2016-02-30T00:00:00Z"), InputError);
  EXPECT_THROW(ts("yesterday"), InputError);
  EXPECT_EQ(local_time(ts("2016-06-21T23:30:00Z"), 60).day, 22u);
}

TEST(Align, ConstantSeries) { EXPECT_DOUBLE_EQ(align_one(std::vector<double>(40, 500.0)), 500.0); }

TEST(Align, AlternatingSeries) {
  std::vector<double> v;
  for (int i = 0; i < 30; ++i) v.push_back(i % 2 ? 600.0 : 400.0);
  EXPECT_DOUBLE_EQ(align_one(v), 500.0);
}

TEST(Align, RampIsArithmeticMean) {
  std::vector<double> v;
  for (int i = 0; i < 30; ++i) v.push_back(i);
  v.push_back(1000.0);  // t0 + 30 s falls outside the half-open window
  double oracle = 0;
  for (int i = 0; i < 30; ++i) oracle += i;
  EXPECT_DOUBLE_EQ(align_one(v), oracle / 30.0);
  EXPECT_DOUBLE_EQ(oracle / 30.0, 14.5);
}

TEST(Align, UncoveredImagesAreDroppedAndCounted) {
  const double t0 = epoch_seconds(ts("2023-06-12T10:00:00Z"));
  std::vector<RadiometerReading> series{{t0 + 5, 100.0}};
  auto r = align_radiometer({{ts("2023-06-12T10:00:00Z"), {"a.png"}}, {ts("2023-06-12T11:00:00Z"), {"b.png"}}}, series);
  ASSERT_EQ(r.samples.size(), 1u);
  EXPECT_EQ(r.dropped_no_coverage, 1u);
}

TEST(Filter, DefaultRules) {
  FilterRules rules;
  auto r = filter_samples({sample_at("2023-06-12T01:30:00Z", 500), sample_at("2023-06-12T12:00:00Z", 1.5),
                           sample_at("2023-06-12T12:00:00Z", 2.0), sample_at("2023-06-12T03:00:00Z", 50)},
                          rules);
  EXPECT_EQ(r.counts.removed_night, 1u);
  EXPECT_EQ(r.counts.removed_low_irradiance, 1u);
  ASSERT_EQ(r.samples.size(), 2u);
  EXPECT_DOUBLE_EQ(r.samples[0].irradiance_wm2, 2.0);
}

TEST(Filter, NightWindowUsesLocalTime) {
  FilterRules rules;
  rules.utc_offset_minutes = 120;
  auto r = filter_samples({sample_at("2023-06-11T23:30:00Z", 500)}, rules);  // 01:30 local
  EXPECT_EQ(r.counts.removed_night, 1u);
}

TEST(Filter, Blocklist) {
  FilterRules rules;
  rules.blocklist = {"img.png"};
  auto r = filter_samples({sample_at("2023-06-12T12:00:00Z", 300)}, rules);
  EXPECT_EQ(r.counts.removed_blocklist, 1u);
  EXPECT_TRUE(r.samples.empty());
}

TEST(Split, DayRules) {
  EXPECT_EQ(split_for_day(6), Split::test);
  EXPECT_EQ(split_for_day(17), Split::val);
  EXPECT_EQ(split_for_day(12), Split::train);
  EXPECT_EQ(split_for_day(5), Split::test);
  EXPECT_EQ(split_for_day(9), Split::test);
  EXPECT_EQ(split_for_day(10), Split::train);
  EXPECT_EQ(split_for_day(15), Split::val);
  EXPECT_EQ(split_for_day(20), Split::train);
}

TEST(Split, PartitionIsDisjointAndExhaustive) {
  std::vector<Sample> all;
  for (int d = 1; d <= 28; ++d) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "2023-02-%02dT12:00:00Z", d);
    all.push_back(sample_at(buf, d));
  }
  auto sets = split_by_day(all);
  EXPECT_EQ(sets.train.size() + sets.val.size() + sets.test.size(), all.size());
  EXPECT_EQ(sets.test.size(), 5u);
  EXPECT_EQ(sets.val.size(), 5u);
  for (const auto& s : sets.test) EXPECT_EQ(s.split, Split::test);
}

TEST(Stats, TwoPointPopulation) {
  auto st = compute_stats(std::vector<double>{100, 300});
  EXPECT_DOUBLE_EQ(st.mean_wm2, 200);
  EXPECT_DOUBLE_EQ(st.std_wm2, 100);
  EXPECT_DOUBLE_EQ(st.normalize(100), -1);
  EXPECT_DOUBLE_EQ(st.normalize(300), 1);
  EXPECT_DOUBLE_EQ(st.normalize(200), 0);
}

TEST(Stats, NormalizedTrainMoments) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(2, 1000);
  std::vector<double> y(997);
  for (auto& v : y) v = u(rng);
  auto st = compute_stats(y);
  auto z = normalize(y, st);
  double m = 0, s = 0;
  for (double v : z) m += v;
  m /= static_cast<double>(z.size());
  for (double v : z) s += (v - m) * (v - m);
  s = std::sqrt(s / static_cast<double>(z.size()));
  EXPECT_NEAR(m, 0, 1e-6);
  EXPECT_NEAR(s, 1, 1e-6);
  auto back = denormalize(z, st);
  for (std::size_t i = 0; i < y.size(); ++i) EXPECT_NEAR(back[i], y[i], 1e-6);
}

TEST(Stats, ZeroStdIsConfigError) {
  EXPECT_THROW(compute_stats(std::vector<double>{5, 5, 5}), ConfigError);
  EXPECT_THROW(compute_stats(std::vector<double>{}), ConfigError);
}

TEST(Sequences, Counting) {
  SequenceOptions o;
  EXPECT_EQ(make_sequences(contiguous(8), o).size(), 1u);
  EXPECT_EQ(make_sequences(contiguous(7), o).size(), 0u);
  EXPECT_EQ(make_sequences(contiguous(10), o).size(), 3u);
}

TEST(Sequences, MatchesSlidingWindowEnumeration) {
  // Two runs separated by a 15 minute gap, plus a split boundary.
  auto s = contiguous(30);
  for (std::size_t i = 12; i < s.size(); ++i) s[i].timestamp += std::chrono::minutes(10);
  for (std::size_t i = 22; i < s.size(); ++i) s[i].split = Split::val;
  SequenceOptions o;
  o.context = 3;
  o.horizon = 2;
  o.stride = 2;
  auto seqs = make_sequences(s, o);
  // Runs [0,12), [12,22), [22,30); windows of 5 at stride 2.
  std::vector<std::size_t> starts;
  for (auto [a, b] : {std::pair<std::size_t, std::size_t>{0, 12}, {12, 22}, {22, 30}})
    for (std::size_t i = a; i + 5 <= b; i += 2) starts.push_back(i);
  ASSERT_EQ(seqs.size(), starts.size());
  for (std::size_t i = 0; i < seqs.size(); ++i) {
    EXPECT_EQ(seqs[i].members.front(), starts[i]);
    EXPECT_EQ(seqs[i].horizon_targets.size(), 2u);
    EXPECT_DOUBLE_EQ(seqs[i].horizon_targets[0], s[starts[i] + 3].irradiance_wm2);
  }
}

TEST(Sequences, ToleranceBoundaries) {
  SequenceOptions o;
  EXPECT_EQ(make_sequences(contiguous(8, 6.0), o).size(), 1u);   // +20 %
  EXPECT_EQ(make_sequences(contiguous(8, 6.05), o).size(), 0u);  // beyond
  EXPECT_EQ(make_sequences(contiguous(8, 4.0), o).size(), 1u);   // -20 %
}

TEST(Preprocess, IdentityAndFullMask) {
  Image img(8, 8, 3);
  std::mt19937 rng(1);
  std::uniform_real_distribution<float> u(0, 1);
  for (auto& v : img.pixels) v = u(rng);
  PreprocessConfig cfg;
  cfg.side = 8;
  EXPECT_EQ(preprocess_image(img, cfg), img);
  cfg.mask.polygons.push_back({{0, 0}, {8, 0}, {8, 8}, {0, 8}});
  for (float v : preprocess_image(img, cfg).pixels) EXPECT_EQ(v, 0.0f);
}

TEST(Preprocess, CheckerboardDownsample) {
  // Reference resampler: half-pixel centres, 4x4 -> 2x2 samples the midpoint
  // of each 2x2 block, averaging a black and a white pixel on each axis.
  Image img(4, 4, 3);
  for (std::size_t y = 0; y < 4; ++y)
    for (std::size_t x = 0; x < 4; ++x)
      for (std::size_t c = 0; c < 3; ++c) img.at(y, x, c) = static_cast<float>((x + y) % 2);
  PreprocessConfig cfg;
  cfg.side = 2;
  auto out = preprocess_image(img, cfg);
  for (float v : out.pixels) EXPECT_FLOAT_EQ(v, 0.5f);
}

TEST(Preprocess, CropThenResize) {
  Image img(6, 10, 3);
  for (std::size_t y = 0; y < 6; ++y)
    for (std::size_t x = 0; x < 10; ++x) img.at(y, x, 0) = static_cast<float>(x);
  PreprocessConfig cfg;
  cfg.side = 3;
  auto out = preprocess_image(img, cfg);  // centred 6x6 square spans x = 2..7
  EXPECT_FLOAT_EQ(out.at(0, 0, 0), 2.5f);
  EXPECT_FLOAT_EQ(out.at(0, 2, 0), 6.5f);
}

TEST(Preprocess, BitmapMaskMustMatchSide) {
  MaskSpec m;
  m.bitmap = std::vector<std::uint8_t>(9, 1);
  m.bitmap_side = 3;
  EXPECT_THROW(build_mask(m, 4), ConfigError);
}

TEST(Augment, DeterministicUnderSeed) {
  Image img(6, 6, 3);
  std::mt19937 rng(2);
  std::uniform_real_distribution<float> u(0, 1);
  for (auto& v : img.pixels) v = u(rng);
  EXPECT_EQ(augment(img, 42), augment(img, 42));
  EXPECT_NE(augment(img, 42), augment(img, 43));
}

TEST(Augment, IdentityParams) {
  Image img(5, 5, 3);
  for (std::size_t i = 0; i < img.pixels.size(); ++i) img.pixels[i] = static_cast<float>(i % 7) / 7.0f;
  EXPECT_EQ(apply_augment(img, AugmentParams{}), img);
}

TEST(Augment, QuarterTurnMatchesPermutation) {
  // [[a b] [c d]] turned a quarter counter-clockwise is [[b d] [a c]].
  Image img(2, 2, 1);
  img.pixels = {0.1f, 0.2f, 0.3f, 0.4f};
  AugmentParams p;
  p.rotation_deg = 90;
  auto out = apply_augment(img, p);
  const std::vector<float> oracle{0.2f, 0.4f, 0.1f, 0.3f};
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(out.pixels[i], oracle[i], 1e-6);
}

TEST(Augment, DrawnParamsStayInRange) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 1000; ++i) {
    auto p = draw_augment_params(rng);
    EXPECT_LE(std::abs(p.brightness - 1), 0.01);
    EXPECT_LE(std::abs(p.contrast - 1), 0.01);
    EXPECT_LE(std::abs(p.saturation - 1), 0.01);
    EXPECT_LE(std::abs(p.hue_shift), 0.01);
    EXPECT_LE(std::abs(p.rotation_deg), 15.0);
  }
}

TEST(Synth, NoCloudsGivesEnvelope) {
  SynthConfig cfg;
  cfg.clouds_per_hour = 0;
  SkyScene scene(cfg);
  const double t = epoch_seconds(ts("2023-06-03T09:17:00Z"));
  EXPECT_DOUBLE_EQ(scene.irradiance(t), scene.envelope(t));
  EXPECT_GT(scene.envelope(t), 0);
}

TEST(Synth, FullOcclusionGivesDiffuseFloor) {
  SynthConfig cfg;
  SkyScene scene(cfg);
  const double t = epoch_seconds(ts("2023-06-03T12:00:00Z"));
  const auto sun = scene.sun_position(t);
  scene.set_clouds(SkyScene::day_of(t), {Cloud{sun[0], sun[1], t, 0, 0, 0.5}});
  EXPECT_NEAR(scene.irradiance(t), scene.envelope(t) * cfg.diffuse_fraction, 1e-9);
}

TEST(Synth, HalfDiscOcclusion) {
  SynthConfig cfg;
  SkyScene scene(cfg);
  const double t = epoch_seconds(ts("2023-06-03T12:00:00Z"));
  const auto sun = scene.sun_position(t);
  // A very large cloud whose edge runs through the sun centre.
  const double R = 1e4;
  scene.set_clouds(SkyScene::day_of(t), {Cloud{sun[0] - R, sun[1], t, 0, 0, R}});
  // Pixel-count oracle on an independent fine grid.
  std::size_t in = 0, covered = 0;
  const int n = 400;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double x = (j + 0.5) / n * 2 - 1, y = (i + 0.5) / n * 2 - 1;
      if (x * x + y * y > 1) continue;
      ++in;
      const double px = sun[0] + x * cfg.sun_radius, py = sun[1] + y * cfg.sun_radius;
      if (std::hypot(px - (sun[0] - R), py - sun[1]) <= R) ++covered;
    }
  const double frac = static_cast<double>(covered) / static_cast<double>(in);
  EXPECT_NEAR(frac, 0.5, 1e-3);
  const double expected = scene.envelope(t) * (1 - 0.5 * (1 - cfg.diffuse_fraction));
  EXPECT_NEAR(scene.irradiance(t), expected, 1e-6 * expected);
}

TEST(Synth, ScenesAreDeterministic) {
  SynthConfig cfg;
  cfg.seed = 11;
  SkyScene a(cfg), b(cfg);
  const double t = epoch_seconds(ts("2023-06-04T10:00:00Z"));
  EXPECT_EQ(a.render(t), b.render(t));
  EXPECT_DOUBLE_EQ(a.occlusion(t + 13), b.occlusion(t + 13));
  cfg.seed = 12;
  SkyScene c(cfg);
  double diff = 0;
  for (int i = 0; i < 100; ++i) diff += std::abs(a.occlusion(t + 60.0 * i) - c.occlusion(t + 60.0 * i));
  EXPECT_GT(diff, 0);
}

TEST(Synth, EndToEndPrepareIsIdempotent) {
  SynthConfig cfg;
  cfg.image_side = 8;
  cfg.day_count = 10;
  cfg.frame_start_hour = 11;
  cfg.frame_end_hour = 12;
  cfg.seed = 5;
  auto dir = fresh_dir("synth_e2e");
  auto sum = synth_sky(cfg, dir / "raw");
  EXPECT_EQ(sum.frames, cfg.frame_count());
  EXPECT_EQ(cfg.frames_per_day(), 13u);

  ArchiveSource src;
  src.image_index = sum.image_index;
  src.radiometer = sum.radiometer;
  auto rep = prepare_dataset(src, FilterRules{}, dir / "a");
  EXPECT_EQ(rep.filter.kept, sum.frames);
  EXPECT_EQ(rep.test, 5u * 13u);
  EXPECT_EQ(rep.val, 0u);
  EXPECT_EQ(rep.train, 5u * 13u);

  // Stats come from the training manifest alone.
  auto train = read_manifest(manifest_path(dir / "a", Split::train));
  auto st = compute_stats(train);
  EXPECT_DOUBLE_EQ(st.mean_wm2, rep.stats.mean_wm2);
  EXPECT_DOUBLE_EQ(st.std_wm2, rep.stats.std_wm2);

  prepare_dataset(src, FilterRules{}, dir / "b");
  auto slurp = [](const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(f), {});
  };
  for (Split s : {Split::train, Split::val, Split::test})
    EXPECT_EQ(slurp(manifest_path(dir / "a", s)), slurp(manifest_path(dir / "b", s)));
  EXPECT_EQ(slurp(dir / "a" / "stats.json"), slurp(dir / "b" / "stats.json"));

  // Every sample maps back to a decodable image with the configured side.
  auto img = read_png(train.front().image_paths.front());
  EXPECT_EQ(img.width, 8u);
}

TEST(Synth, DualExposureWritesPairs) {
  SynthConfig cfg;
  cfg.image_side = 8;
  cfg.day_count = 1;
  cfg.frame_start_hour = 12;
  cfg.frame_end_hour = 12.1;
  cfg.dual_exposure = true;
  auto dir = fresh_dir("synth_dual");
  auto sum = synth_sky(cfg, dir);
  auto idx = read_image_index_csv(sum.image_index);
  ASSERT_EQ(idx.size(), 2u);
  EXPECT_EQ(idx[0].image_paths.size(), 2u);
  auto scanned = scan_image_directory(dir / "images", "_short", "_long");
  ASSERT_EQ(scanned.size(), 2u);
  EXPECT_EQ(scanned[0].image_paths, idx[0].image_paths);
}

TEST(Manifest, RoundTripAndErrors) {
  auto dir = fresh_dir("manifest");
  std::vector<Sample> v{sample_at("2023-06-12T12:00:00Z", 321.5)};
  v[0].split = Split::val;
  write_manifest(v, dir / "m.jsonl");
  EXPECT_EQ(read_manifest(dir / "m.jsonl"), v);
  EXPECT_THROW(read_manifest(dir / "missing.jsonl"), MissingPrerequisite);
  std::ofstream(dir / "bad.jsonl") << "{\"timestamp\": 3}\n";
  EXPECT_THROW(read_manifest(dir / "bad.jsonl"), InputError);
}
