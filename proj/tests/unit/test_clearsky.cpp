// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The skycast Authors

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "skycast/clearsky.hpp"

using namespace skycast;
using namespace skycast::clearsky;
using skycast::data::parse_timestamp;

namespace {
SiteMeteo ref_meteo() { return SiteMeteo{51.14, -1.44, 1013.25, 0.1, 1.0}; }
}  // namespace

TEST(SolarPosition, EquatorEquinoxNoon) {
  // Solar noon at Greenwich on the March 2021 equinox is near 12:07 UTC.
  auto p = solar_position(parse_timestamp("2021-03-20T12:07:00Z"), 0.0, 0.0);
  EXPECT_GT(p.elevation_deg, 89.0);
}

TEST(SolarPosition, MidnightIsBelowHorizon) {
  EXPECT_LT(solar_position(parse_timestamp("2016-06-21T00:00:00Z"), 51.14, -1.44).elevation_deg, 0.0);
  EXPECT_LT(solar_position(parse_timestamp("2021-03-20T00:00:00Z"), 0.0, 0.0).elevation_deg, -80.0);
}

TEST(SolarPosition, MidLatitudeSummerSolstice) {
  // Reference: pvlib 0.15 solar position (NREL SPA), apparent elevation
  // 62.2532 deg, azimuth 176.24 deg.
  auto p = solar_position(parse_timestamp("2016-06-21T12:00:00Z"), 51.14, -1.44);
  EXPECT_NEAR(p.elevation_deg, 62.2532, 0.5);
  EXPECT_NEAR(p.elevation_deg, 62.2532, 0.05);
  EXPECT_NEAR(p.azimuth_deg, 176.24, 0.5);
}

TEST(SolarPosition, EquatorReference) {
  // pvlib reference for 2021-03-20 12:00 UTC at (0, 0): 88.147 deg.
  EXPECT_NEAR(solar_position(parse_timestamp("2021-03-20T12:00:00Z"), 0.0, 0.0).elevation_deg, 88.147, 0.05);
}

TEST(Solis, NightIsZero) {
  EXPECT_EQ(solis_ghi(0.0, ref_meteo()), 0.0);
  EXPECT_EQ(solis_ghi(-12.0, ref_meteo()), 0.0);
}

TEST(Solis, MonotoneInElevation) {
  const double a = solis_ghi(10, ref_meteo()), b = solis_ghi(30, ref_meteo()), c = solis_ghi(60, ref_meteo());
  EXPECT_LT(a, b);
  EXPECT_LT(b, c);
}

TEST(Solis, MatchesIndependentImplementation) {
  // pvlib.clearsky.simplified_solis(apparent_elevation, aod700=0.1,
  // precipitable_water=1.0, pressure=101325.0), dni_extra 1364.
  EXPECT_NEAR(solis_ghi(60, ref_meteo()), 916.6065597730009, 916.6065597730009 * 0.01);
  EXPECT_NEAR(solis_ghi(60, ref_meteo()), 916.6065597730009, 1e-6);
  EXPECT_NEAR(solis_ghi(10, ref_meteo()), 125.28119697, 1e-6);
  EXPECT_NEAR(solis_ghi(30, ref_meteo()), 476.87815689, 1e-6);
}

TEST(Solis, OutOfRangeMeteoIsClamped) {
  SiteMeteo hi = ref_meteo();
  hi.aod700 = 0.9;
  SiteMeteo edge = ref_meteo();
  edge.aod700 = kSolisMaxAod;
  EXPECT_DOUBLE_EQ(solis_ghi(45, hi), solis_ghi(45, edge));
  SiteMeteo bad = ref_meteo();
  bad.pressure_hpa = 0;
  EXPECT_THROW(solis_ghi(45, bad), ConfigError);
}

TEST(Solis, ClearSkySeriesIsZeroAtNight) {
  MeteoClimatology clim;
  clim.months[6] = {};
  auto fn = solis_clearsky(51.14, -1.44, clim);
  for (int h = 0; h < 24; ++h) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "2016-06-21T%02d:00:00Z", h);
    auto t = parse_timestamp(buf);
    const double v = fn(t);
    EXPECT_GE(v, 0.0);
    if (solar_position(t, 51.14, -1.44).elevation_deg <= 0) {
      EXPECT_EQ(v, 0.0);
    }
  }
  EXPECT_THROW(fn(parse_timestamp("2016-07-01T12:00:00Z")), ConfigError);
}

TEST(Meteo, ParsesMonthlyJson) {
  auto c = meteo_from_json(nlohmann::json::parse(R"({"6": {"aod700": 0.12, "pw_cm": 1.8, "pressure_hpa": 1005}})"));
  EXPECT_DOUBLE_EQ(c.for_month(6).aod700, 0.12);
  EXPECT_THROW(meteo_from_json(nlohmann::json::parse(R"({"13": {}})")), ConfigError);
  EXPECT_THROW(meteo_from_json(nlohmann::json::parse(R"({"1": {"aod": 1}})")), ConfigError);
}

TEST(SmartPersistence, Examples) {
  EXPECT_DOUBLE_EQ(smart_persistence(600, 600, 500), 500);
  EXPECT_DOUBLE_EQ(smart_persistence(300, 600, 500), 250);
  EXPECT_DOUBLE_EQ(smart_persistence(3, 0.5, 500), 3);
  EXPECT_THROW(smart_persistence(-1, 600, 500), ContractError);
}

TEST(SmartPersistence, UnitIndexReturnsFutureClearSky) {
  for (double c : {1.0, 7.5, 250.0, 1111.0})
    for (double f : {0.0, 3.0, 999.0}) EXPECT_DOUBLE_EQ(smart_persistence(c, c, f), f);
}

TEST(BackbonePersistence, Shift) {
  std::vector<double> s{1, 2, 3, 4};
  EXPECT_EQ(backbone_persistence(s, 1), (std::vector<double>{1, 2, 3}));
  EXPECT_EQ(backbone_persistence(s, 0), s);
  EXPECT_TRUE(backbone_persistence(s, 4).empty());
  std::vector<double> c(6, 5.0);
  auto p = backbone_persistence(c, 3);
  for (std::size_t i = 0; i < p.size(); ++i) EXPECT_EQ(p[i], c[i + 3]);
}

TEST(ClearSkyTable, InterpolatesAndRejectsGaps) {
  auto dir = std::filesystem::temp_directory_path() / "skycast_test_cstable";
  std::filesystem::create_directories(dir);
  {
    std::ofstream f(dir / "c.csv");
    f << "timestamp,ghi_clear_wm2\n2023-06-01T10:00:00Z,100\n2023-06-01T10:10:00Z,200\n";
  }
  auto fn = table_clearsky(dir / "c.csv");
  EXPECT_DOUBLE_EQ(fn(parse_timestamp("2023-06-01T10:05:00Z")), 150);
  EXPECT_DOUBLE_EQ(fn(parse_timestamp("2023-06-01T10:10:00Z")), 200);
  EXPECT_THROW(fn(parse_timestamp("2023-06-01T11:00:00Z")), InputError);
  EXPECT_THROW(table_clearsky(dir / "none.csv"), MissingPrerequisite);
}
