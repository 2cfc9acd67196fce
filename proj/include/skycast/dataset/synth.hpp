// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The skycast Authors
#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <vector>

#include <json.hpp>

#include "skycast/dataset/align.hpp"
#include "skycast/dataset/image.hpp"
#include "skycast/json_util.hpp"

namespace skycast::data {

/// Parameters of the synthetic all-sky camera. Scene coordinates are
/// fractions of the image side; times of day are UTC hours.
struct SynthConfig {
  std::size_t image_side = 32;
  double cadence_minutes = 5.0;
  int year = 2023;
  unsigned month = 6;
  unsigned first_day = 1;
  unsigned day_count = 20;
  double frame_start_hour = 7.0;
  double frame_end_hour = 17.0;  // inclusive when on the cadence grid
  double sunrise_hour = 5.0;
  double sunset_hour = 19.0;
  double peak_wm2 = 900.0;
  double envelope_exponent = 1.2;
  double diffuse_fraction = 0.3;
  double sun_radius = 0.07;
  double clouds_per_hour = 6.0;
  double cloud_radius_min = 0.07;
  double cloud_radius_max = 0.16;
  double wind_min = 0.5;  // image sides per hour
  double wind_max = 1.0;
  double window_seconds = 30.0;
  double radiometer_hz = 1.0;
  bool dual_exposure = false;
  std::uint64_t seed = 0;

  std::size_t frames_per_day() const {
    return static_cast<std::size_t>(std::floor((frame_end_hour - frame_start_hour) * 60.0 / cadence_minutes + 1e-9)) + 1;
  }
  std::size_t frame_count() const { return frames_per_day() * day_count; }

  void validate() const {
    if (image_side < 4) throw ConfigError("synth: image_side must be >= 4");
    if (!(cadence_minutes > 0)) throw ConfigError("synth: cadence must be positive");
    if (day_count == 0 || first_day == 0 || first_day + day_count - 1 > 28)
      throw ConfigError("synth: days must lie within 1..28");
    if (!(frame_start_hour < frame_end_hour) || !(sunrise_hour < frame_start_hour) || !(frame_end_hour < sunset_hour))
      throw ConfigError("synth: need sunrise < frame_start < frame_end < sunset");
    if (diffuse_fraction < 0 || diffuse_fraction > 1) throw ConfigError("synth: diffuse_fraction must be in [0,1]");
    if (!(cloud_radius_min > 0) || cloud_radius_max < cloud_radius_min) throw ConfigError("synth: bad cloud radii");
    if (!(wind_min > 0) || wind_max < wind_min) throw ConfigError("synth: bad wind range");
    if (clouds_per_hour < 0 || !(sun_radius > 0)) throw ConfigError("synth: bad cloud rate or sun radius");
    if (!(radiometer_hz > 0) || !(window_seconds > 0)) throw ConfigError("synth: bad radiometer sampling");
  }
};

inline nlohmann::json to_json(const SynthConfig& c) {
  return {{"image_side", c.image_side},
          {"cadence_minutes", c.cadence_minutes},
          {"year", c.year},
          {"month", c.month},
          {"first_day", c.first_day},
          {"day_count", c.day_count},
          {"frame_start_hour", c.frame_start_hour},
          {"frame_end_hour", c.frame_end_hour},
          {"sunrise_hour", c.sunrise_hour},
          {"sunset_hour", c.sunset_hour},
          {"peak_wm2", c.peak_wm2},
          {"envelope_exponent", c.envelope_exponent},
          {"diffuse_fraction", c.diffuse_fraction},
          {"sun_radius", c.sun_radius},
          {"clouds_per_hour", c.clouds_per_hour},
          {"cloud_radius_min", c.cloud_radius_min},
          {"cloud_radius_max", c.cloud_radius_max},
          {"wind_min", c.wind_min},
          {"wind_max", c.wind_max},
          {"window_seconds", c.window_seconds},
          {"radiometer_hz", c.radiometer_hz},
          {"dual_exposure", c.dual_exposure},
          {"seed", c.seed}};
}

inline SynthConfig synth_config_from_json(const nlohmann::json& j) {
  const std::string w = "synthetic";
  check_keys(j,
             {"image_side", "cadence_minutes", "year", "month", "first_day", "day_count", "frame_start_hour",
              "frame_end_hour", "sunrise_hour", "sunset_hour", "peak_wm2", "envelope_exponent", "diffuse_fraction",
              "sun_radius", "clouds_per_hour", "cloud_radius_min", "cloud_radius_max", "wind_min", "wind_max",
              "window_seconds", "radiometer_hz", "dual_exposure", "seed"},
             w);
  SynthConfig c;
  read_opt(j, "image_side", c.image_side, w);
  read_opt(j, "cadence_minutes", c.cadence_minutes, w);
  read_opt(j, "year", c.year, w);
  read_opt(j, "month", c.month, w);
  read_opt(j, "first_day", c.first_day, w);
  read_opt(j, "day_count", c.day_count, w);
  read_opt(j, "frame_start_hour", c.frame_start_hour, w);
  read_opt(j, "frame_end_hour", c.frame_end_hour, w);
  read_opt(j, "sunrise_hour", c.sunrise_hour, w);
  read_opt(j, "sunset_hour", c.sunset_hour, w);
  read_opt(j, "peak_wm2", c.peak_wm2, w);
  read_opt(j, "envelope_exponent", c.envelope_exponent, w);
  read_opt(j, "diffuse_fraction", c.diffuse_fraction, w);
  read_opt(j, "sun_radius", c.sun_radius, w);
  read_opt(j, "clouds_per_hour", c.clouds_per_hour, w);
  read_opt(j, "cloud_radius_min", c.cloud_radius_min, w);
  read_opt(j, "cloud_radius_max", c.cloud_radius_max, w);
  read_opt(j, "wind_min", c.wind_min, w);
  read_opt(j, "wind_max", c.wind_max, w);
  read_opt(j, "window_seconds", c.window_seconds, w);
  read_opt(j, "radiometer_hz", c.radiometer_hz, w);
  read_opt(j, "dual_exposure", c.dual_exposure, w);
  read_opt(j, "seed", c.seed, w);
  c.validate();
  return c;
}

/// A disc-shaped cloud drifting at constant velocity.
struct Cloud {
  double u0 = 0, v0 = 0;  // position at t0
  double t0 = 0;          // epoch seconds
  double du = 0, dv = 0;  // image sides per second
  double radius = 0.1;

  std::array<double, 2> at(double t) const { return {u0 + du * (t - t0), v0 + dv * (t - t0)}; }
};

/// Deterministic scene: sun on a diurnal arc, clouds drawn per day from a
/// generator seeded by (seed, day).
class SkyScene {
 public:
  explicit SkyScene(SynthConfig cfg, std::size_t disc_grid = 24) : cfg_(std::move(cfg)) {
    cfg_.validate();
    // Cell centres of an even grid over the sun's bounding square that fall
    // inside the unit disc; symmetric about both axes.
    for (std::size_t i = 0; i < disc_grid; ++i)
      for (std::size_t j = 0; j < disc_grid; ++j) {
        const double x = (static_cast<double>(j) + 0.5) / static_cast<double>(disc_grid) * 2 - 1;
        const double y = (static_cast<double>(i) + 0.5) / static_cast<double>(disc_grid) * 2 - 1;
        if (x * x + y * y <= 1) disc_.push_back({x, y});
      }
  }

  const SynthConfig& config() const { return cfg_; }

  static double hour_of_day(double t) {
    const double s = std::fmod(t, 86400.0);
    return (s < 0 ? s + 86400.0 : s) / 3600.0;
  }
  static long day_of(double t) { return static_cast<long>(std::floor(t / 86400.0)); }

  double day_phase(double t) const {
    return (hour_of_day(t) - cfg_.sunrise_hour) / (cfg_.sunset_hour - cfg_.sunrise_hour);
  }

  /// Clear-sky irradiance: peak * sin(pi * phase)^exponent between sunrise
  /// and sunset, zero otherwise.
  double envelope(double t) const {
    const double p = day_phase(t);
    if (p <= 0 || p >= 1) return 0.0;
    return cfg_.peak_wm2 * std::pow(std::sin(std::numbers::pi * p), cfg_.envelope_exponent);
  }

  std::array<double, 2> sun_position(double t) const {
    const double p = std::clamp(day_phase(t), 0.0, 1.0);
    return {0.5 - 0.36 * std::cos(std::numbers::pi * p), 0.62 - 0.36 * std::sin(std::numbers::pi * p)};
  }

  void set_clouds(long day, std::vector<Cloud> clouds) { clouds_[day] = std::move(clouds); }

  const std::vector<Cloud>& clouds_for_day(long day) const {
    auto it = clouds_.find(day);
    if (it != clouds_.end()) return it->second;
    return clouds_.emplace(day, draw_clouds(day)).first->second;
  }

  /// Fraction of the sun disc covered by at least one cloud.
  double occlusion(double t) const {
    const auto sun = sun_position(t);
    const auto active = active_clouds(t, sun, cfg_.sun_radius);
    if (active.empty()) return 0.0;
    std::size_t covered = 0;
    for (const auto& p : disc_) {
      const double x = sun[0] + p[0] * cfg_.sun_radius, y = sun[1] + p[1] * cfg_.sun_radius;
      for (const auto& c : active)
        if ((x - c[0]) * (x - c[0]) + (y - c[1]) * (y - c[1]) <= c[2] * c[2]) {
          ++covered;
          break;
        }
    }
    return static_cast<double>(covered) / static_cast<double>(disc_.size());
  }

  double irradiance(double t) const {
    return envelope(t) * (1.0 - occlusion(t) * (1.0 - cfg_.diffuse_fraction));
  }

  /// RGB frame; pixels outside the circular field of view are 0.
  Image render(double t, double exposure = 1.0) const {
    const std::size_t n = cfg_.image_side;
    Image img(n, n, 3);
    const auto sun = sun_position(t);
    const auto active = active_clouds(t, {0.5, 0.5}, 0.75);
    const double light = 0.25 + 0.75 * std::sqrt(envelope(t) / cfg_.peak_wm2);
    const double inv = 1.0 / static_cast<double>(n);
    constexpr int ss = 2;
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t x = 0; x < n; ++x) {
        std::array<double, 3> acc{0, 0, 0};
        int inside = 0;
        for (int sy = 0; sy < ss; ++sy)
          for (int sx = 0; sx < ss; ++sx) {
            const double u = (static_cast<double>(x) + (sx + 0.5) / ss) * inv;
            const double v = (static_cast<double>(y) + (sy + 0.5) / ss) * inv;
            if ((u - 0.5) * (u - 0.5) + (v - 0.5) * (v - 0.5) > 0.25) continue;
            ++inside;
            const auto c = shade(u, v, sun, active, light);
            for (int k = 0; k < 3; ++k) acc[static_cast<std::size_t>(k)] += c[static_cast<std::size_t>(k)];
          }
        if (inside == 0) continue;
        for (std::size_t k = 0; k < 3; ++k)
          img.at(y, x, k) = static_cast<float>(std::clamp(acc[k] / (ss * ss) * exposure, 0.0, 1.0));
      }
    return img;
  }

 private:
  std::vector<std::array<double, 3>> active_clouds(double t, std::array<double, 2> centre, double reach) const {
    std::vector<std::array<double, 3>> out;
    for (const auto& c : clouds_for_day(day_of(t))) {
      const auto p = c.at(t);
      const double d = std::hypot(p[0] - centre[0], p[1] - centre[1]);
      if (d <= c.radius + reach) out.push_back({p[0], p[1], c.radius});
    }
    return out;
  }

  std::array<double, 3> shade(double u, double v, std::array<double, 2> sun,
                              const std::vector<std::array<double, 3>>& clouds, double light) const {
    for (const auto& c : clouds) {
      const double d2 = (u - c[0]) * (u - c[0]) + (v - c[1]) * (v - c[1]);
      if (d2 <= c[2] * c[2]) {
        const double edge = std::sqrt(d2) / c[2];
        const double g = light * (0.8 + 0.15 * edge);
        return {g, g, g * 1.02};
      }
    }
    const double ds = std::hypot(u - sun[0], v - sun[1]);
    if (ds <= cfg_.sun_radius) return {1.0, 1.0, 0.95};
    const double glow = 0.6 * std::exp(-(ds - cfg_.sun_radius) / 0.06);
    const double h = std::clamp(v, 0.0, 1.0);
    return {light * (0.25 + 0.15 * h) + glow, light * (0.45 + 0.15 * h) + glow, light * 0.9 + glow * 0.8};
  }

  std::vector<Cloud> draw_clouds(long day) const {
    std::seed_seq seq{static_cast<std::uint32_t>(cfg_.seed), static_cast<std::uint32_t>(cfg_.seed >> 32),
                      static_cast<std::uint32_t>(day), 0x5eedu};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double dir = unit(rng) * 2 * std::numbers::pi;
    const double speed = (cfg_.wind_min + (cfg_.wind_max - cfg_.wind_min) * unit(rng)) / 3600.0;
    const double wu = std::cos(dir), wv = std::sin(dir);
    const double travel = (1.5 + 2 * cfg_.cloud_radius_max) / speed;
    const double day_start = static_cast<double>(day) * 86400.0;
    const double t_begin = day_start + cfg_.frame_start_hour * 3600.0 - travel;
    const double t_end = day_start + cfg_.frame_end_hour * 3600.0 + 3600.0;
    std::vector<Cloud> out;
    if (cfg_.clouds_per_hour <= 0) return out;
    std::exponential_distribution<double> gap(cfg_.clouds_per_hour / 3600.0);
    for (double t = t_begin + gap(rng); t < t_end; t += gap(rng)) {
      Cloud c;
      c.radius = cfg_.cloud_radius_min + (cfg_.cloud_radius_max - cfg_.cloud_radius_min) * unit(rng);
      const double lateral = (unit(rng) * 2 - 1) * 0.75;
      const double back = 0.75 + c.radius;
      c.u0 = 0.5 - wu * back - wv * lateral;
      c.v0 = 0.5 - wv * back + wu * lateral;
      c.t0 = t;
      c.du = wu * speed;
      c.dv = wv * speed;
      out.push_back(c);
    }
    return out;
  }

  SynthConfig cfg_;
  std::vector<std::array<double, 2>> disc_;
  mutable std::map<long, std::vector<Cloud>> clouds_;
};

struct SynthSummary {
  std::size_t frames = 0;
  std::size_t radiometer_rows = 0;
  std::filesystem::path image_index, radiometer, clearsky;
};

inline std::vector<Timestamp> synth_frame_times(const SynthConfig& cfg) {
  using namespace std::chrono;
  std::vector<Timestamp> out;
  for (unsigned d = 0; d < cfg.day_count; ++d) {
    const sys_days day{year{cfg.year} / month{cfg.month} / std::chrono::day{cfg.first_day + d}};
    for (std::size_t f = 0; f < cfg.frames_per_day(); ++f) {
      const auto secs = std::lround(cfg.frame_start_hour * 3600.0 + static_cast<double>(f) * cfg.cadence_minutes * 60.0);
      out.push_back(Timestamp{day} + seconds{secs});
    }
  }
  return out;
}

/// Writes images/, image_index.csv, radiometer.csv (readings covering each
/// frame's averaging window), clearsky.csv (envelope averaged over the same
/// window) and synthetic.json under `dir`.
inline SynthSummary synth_sky(const SynthConfig& cfg, const std::filesystem::path& dir) {
  cfg.validate();
  namespace fs = std::filesystem;
  fs::create_directories(dir / "images");
  SkyScene scene(cfg);
  std::vector<ImageRecord> index;
  std::vector<RadiometerReading> series;
  const auto readings = static_cast<std::size_t>(std::ceil(cfg.window_seconds * cfg.radiometer_hz - 1e-9));
  std::ofstream clear(dir / "clearsky.csv", std::ios::trunc);
  clear << "timestamp,ghi_clear_wm2\n";
  char buf[96];
  for (const auto& ts : synth_frame_times(cfg)) {
    const double t = epoch_seconds(ts);
    const std::string stem = "sky_" + compact_timestamp(ts);
    ImageRecord rec{ts, {}};
    if (cfg.dual_exposure) {
      for (auto [suffix, gain] : {std::pair{"_short", 0.6}, std::pair{"_long", 1.4}}) {
        const auto p = dir / "images" / (stem + suffix + ".png");
        write_png(scene.render(t, gain), p);
        rec.image_paths.push_back(p.string());
      }
    } else {
      const auto p = dir / "images" / (stem + ".png");
      write_png(scene.render(t), p);
      rec.image_paths.push_back(p.string());
    }
    index.push_back(std::move(rec));
    double clear_mean = 0;
    for (std::size_t i = 0; i < readings; ++i) {
      const double tr = t + static_cast<double>(i) / cfg.radiometer_hz;
      series.push_back({tr, scene.irradiance(tr)});
      clear_mean += scene.envelope(tr);
    }
    clear_mean /= static_cast<double>(std::max<std::size_t>(readings, 1));
    std::snprintf(buf, sizeof buf, "%s,%.6f\n", format_timestamp(ts).c_str(), clear_mean);
    clear << buf;
  }
  SynthSummary s;
  s.frames = index.size();
  s.radiometer_rows = series.size();
  s.image_index = dir / "image_index.csv";
  s.radiometer = dir / "radiometer.csv";
  s.clearsky = dir / "clearsky.csv";
  write_image_index_csv(index, s.image_index);
  write_radiometer_csv(series, s.radiometer);
  std::ofstream meta(dir / "synthetic.json", std::ios::trunc);
  meta << to_json(cfg).dump(2) << '\n';
  return s;
}

}  // namespace skycast::data
