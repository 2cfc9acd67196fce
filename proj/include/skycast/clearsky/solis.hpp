// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The skycast Authors
#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <string>

#include <json.hpp>

#include "skycast/clearsky/solar_position.hpp"
#include "skycast/json_util.hpp"
#include "skycast/log.hpp"

namespace skycast::clearsky {

struct SiteMeteo {
  double latitude = 0, longitude = 0;  // degrees
  double pressure_hpa = 1013.25;
  double aod700 = 0.1;
  double precipitable_water_cm = 1.0;
};

constexpr double kSolisMaxAod = 0.45;
constexpr double kSolisMaxPw = 10.0;

/// Simplified Solis global horizontal irradiance in W/m^2. Inputs beyond the
/// fitted range are clamped with a warning.
inline double solis_ghi(double elevation_deg, const SiteMeteo& m, double dni_extra = 1364.0) {
  if (m.pressure_hpa <= 0) throw ConfigError("solis_ghi: pressure must be positive");
  if (std::abs(m.latitude) > 90) throw ConfigError("solis_ghi: latitude out of range");
  if (elevation_deg <= 0) return 0.0;
  double aod = m.aod700, w = m.precipitable_water_cm;
  if (aod < 0 || aod > kSolisMaxAod || w < 0 || w > kSolisMaxPw) {
    log_warn("solis_ghi: meteo outside the fitted range, clamped");
    aod = std::clamp(aod, 0.0, kSolisMaxAod);
    w = std::clamp(w, 0.0, kSolisMaxPw);
  }
  w = std::max(w, 0.2);
  const double lw = std::log(w);
  const double lp = std::log(m.pressure_hpa / 1013.25);

  const double io0 = 1.08 * std::pow(w, 0.0051);
  const double i01 = 0.97 * std::pow(w, 0.032);
  const double i02 = 0.12 * std::pow(w, 0.56);
  const double i0p = dni_extra * (i02 * aod * aod + i01 * aod + io0 + 0.071 * lp);

  const double tg1 = 1.24 + 0.047 * lw + 0.0061 * lw * lw;
  const double tg0 = 0.27 + 0.043 * lw + 0.0090 * lw * lw;
  const double tgp = 0.0079 * w + 0.1;
  const double taug = tg1 * aod + tg0 + tgp * lp;

  const double g = -0.0147 * lw - 0.3079 * aod * aod + 0.2846 * aod + 0.3798;
  const double sh = std::sin(elevation_deg * std::numbers::pi / 180.0);
  return i0p * std::exp(-taug / std::pow(sh, g)) * sh;
}

/// Monthly climatology: JSON {"1": {"aod700", "pw_cm", "pressure_hpa"}, ...}.
struct MeteoClimatology {
  struct Month {
    double aod700 = 0.1, pw_cm = 1.0, pressure_hpa = 1013.25;
  };
  std::map<unsigned, Month> months;

  Month for_month(unsigned month) const {
    auto it = months.find(month);
    if (it == months.end()) throw ConfigError("meteo climatology has no entry for month " + std::to_string(month));
    return it->second;
  }
};

inline MeteoClimatology meteo_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("meteo: expected an object keyed by month");
  MeteoClimatology c;
  for (auto it = j.begin(); it != j.end(); ++it) {
    unsigned mo = 0;
    try {
      mo = static_cast<unsigned>(std::stoul(it.key()));
    } catch (const std::exception&) {
      throw ConfigError("meteo: month key '" + it.key() + "' is not a number");
    }
    if (mo < 1 || mo > 12) throw ConfigError("meteo: month " + it.key() + " out of range");
    const std::string where = "meteo." + it.key();
    check_keys(*it, {"aod700", "pw_cm", "pressure_hpa"}, where);
    MeteoClimatology::Month m;
    read_opt(*it, "aod700", m.aod700, where);
    read_opt(*it, "pw_cm", m.pw_cm, where);
    read_opt(*it, "pressure_hpa", m.pressure_hpa, where);
    if (m.pressure_hpa <= 0 || m.aod700 < 0 || m.pw_cm < 0) throw ConfigError(where + ": invalid values");
    c.months[mo] = m;
  }
  return c;
}

inline MeteoClimatology read_meteo(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw MissingPrerequisite("meteo climatology not found: " + path.string());
  try {
    return meteo_from_json(nlohmann::json::parse(f));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

/// Clear-sky GHI for a timestamp.
using ClearSkyFn = std::function<double(data::Timestamp)>;

inline ClearSkyFn solis_clearsky(double latitude, double longitude, MeteoClimatology meteo) {
  if (std::abs(latitude) > 90) throw ConfigError("site latitude out of range");
  return [=](data::Timestamp t) {
    const auto pos = solar_position(t, latitude, longitude);
    const auto mo = meteo.for_month(data::local_time(t).month);
    return solis_ghi(pos.elevation_deg, SiteMeteo{latitude, longitude, mo.pressure_hpa, mo.aod700, mo.pw_cm});
  };
}

}  // namespace skycast::clearsky
