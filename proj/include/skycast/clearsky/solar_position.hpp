// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The skycast Authors
#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

#include "skycast/dataset/time.hpp"

namespace skycast::clearsky {

struct SolarPosition {
  double elevation_deg = 0;  // apparent, refraction corrected
  double azimuth_deg = 0;    // clockwise from north
};

namespace detail {
constexpr double kDeg = std::numbers::pi / 180.0;
inline double sind(double d) { return std::sin(d * kDeg); }
inline double cosd(double d) { return std::cos(d * kDeg); }
inline double tand(double d) { return std::tan(d * kDeg); }
inline double wrap360(double d) {
  d = std::fmod(d, 360.0);
  return d < 0 ? d + 360.0 : d;
}

/// Atmospheric refraction in degrees for a true elevation (NOAA fit).
inline double refraction_deg(double e) {
  if (e > 85.0) return 0.0;
  double arcsec;
  if (e > 5.0) {
    const double t = tand(e);
    arcsec = 58.1 / t - 0.07 / (t * t * t) + 0.000086 / std::pow(t, 5);
  } else if (e > -0.575) {
    arcsec = 1735.0 + e * (-518.2 + e * (103.4 + e * (-12.79 + e * 0.711)));
  } else {
    arcsec = -20.772 / tand(e);
  }
  return arcsec / 3600.0;
}
}  // namespace detail

/// Low-precision astronomical algorithm (NOAA solar calculator, after
/// Meeus); about 0.01 degree over 1800-2100.
inline SolarPosition solar_position(double unix_seconds, double latitude_deg, double longitude_deg) {
  using namespace detail;
  const double jd = unix_seconds / 86400.0 + 2440587.5;
  const double jc = (jd - 2451545.0) / 36525.0;
  const double l0 = wrap360(280.46646 + jc * (36000.76983 + jc * 0.0003032));
  const double m = 357.52911 + jc * (35999.05029 - 0.0001537 * jc);
  const double ecc = 0.016708634 - jc * (0.000042037 + 0.0000001267 * jc);
  const double ctr = sind(m) * (1.914602 - jc * (0.004817 + 0.000014 * jc)) + sind(2 * m) * (0.019993 - 0.000101 * jc) +
                     sind(3 * m) * 0.000289;
  const double omega = 125.04 - 1934.136 * jc;
  const double app_long = l0 + ctr - 0.00569 - 0.00478 * sind(omega);
  const double mean_obliq = 23.0 + (26.0 + (21.448 - jc * (46.815 + jc * (0.00059 - jc * 0.001813))) / 60.0) / 60.0;
  const double obliq = mean_obliq + 0.00256 * cosd(omega);
  const double decl = std::asin(sind(obliq) * sind(app_long)) / kDeg;
  const double y = tand(obliq / 2) * tand(obliq / 2);
  const double eot_min =
      4.0 / kDeg *
      (y * sind(2 * l0) - 2 * ecc * sind(m) + 4 * ecc * y * sind(m) * cosd(2 * l0) - 0.5 * y * y * sind(4 * l0) -
       1.25 * ecc * ecc * sind(2 * m));
  double day_min = std::fmod(unix_seconds, 86400.0) / 60.0;
  if (day_min < 0) day_min += 1440.0;
  const double tst = std::fmod(day_min + eot_min + 4.0 * longitude_deg + 2880.0, 1440.0);
  const double ha = tst / 4.0 < 0 ? tst / 4.0 + 180.0 : tst / 4.0 - 180.0;
  const double cos_zen =
      std::clamp(sind(latitude_deg) * sind(decl) + cosd(latitude_deg) * cosd(decl) * cosd(ha), -1.0, 1.0);
  const double zen = std::acos(cos_zen) / kDeg;
  const double denom = cosd(latitude_deg) * sind(zen);
  double az;
  if (std::abs(denom) < 1e-12) {
    az = latitude_deg > 0 ? 180.0 : 0.0;
  } else {
    const double a = std::acos(std::clamp((sind(latitude_deg) * cosd(zen) - sind(decl)) / denom, -1.0, 1.0)) / kDeg;
    az = ha > 0 ? wrap360(a + 180.0) : wrap360(540.0 - a);
  }
  const double elev = 90.0 - zen;
  return {elev + refraction_deg(elev), az};
}

inline SolarPosition solar_position(data::Timestamp t, double latitude_deg, double longitude_deg) {
  return solar_position(data::epoch_seconds(t), latitude_deg, longitude_deg);
}

}  // namespace skycast::clearsky
