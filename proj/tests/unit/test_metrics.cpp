// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The skycast Authors
#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "skycast/clearsky/persistence.hpp"
#include "skycast/metrics.hpp"

using namespace skycast;
using namespace skycast::metrics;

TEST(ErrorMetrics, IdenticalIsZero) {
  const std::vector<double> y{1, 200, 300};
  const auto m = error_metrics(y, y, 100);
  EXPECT_EQ(m.mae, 0);
  EXPECT_EQ(m.rmse, 0);
  EXPECT_EQ(m.nrmse_pct, 0);
}

TEST(ErrorMetrics, ConstantOffset) {
  const auto m = error_metrics({0, 0}, {3, 3}, 1);
  EXPECT_DOUBLE_EQ(m.mae, 3);
  EXPECT_DOUBLE_EQ(m.rmse, 3);
}

TEST(ErrorMetrics, NrmseFromTrainMean) {
  // rmse 112 against a train mean of 250.84 -> 44.65 %
  const auto m = error_metrics({0}, {112}, 250.84);
  EXPECT_NEAR(m.nrmse_pct, 44.65, 0.005);
}

TEST(ErrorMetrics, Errors) {
  EXPECT_THROW(error_metrics({}, {}, 1), ContractError);
  EXPECT_THROW(error_metrics({1}, {1, 2}, 1), ContractError);
  EXPECT_THROW(error_metrics({1}, {1}, 0), ContractError);
}

TEST(ErrorMetrics, RmseDominatesMae) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd(0, 50);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> y(37), h(37);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = 400 + nd(rng), h[i] = 400 + nd(rng);
    const auto m = error_metrics(y, h, 300);
    EXPECT_GE(m.rmse, m.mae);
    EXPECT_GE(m.mae, 0);
  }
}

TEST(ForecastSkill, TableValues) {
  EXPECT_NEAR(forecast_skill(112, 142.58), 21.45, 0.01);
  EXPECT_NEAR(forecast_skill(139.71, 241.04), 42.04, 0.01);
  EXPECT_DOUBLE_EQ(forecast_skill(50, 50), 0);
  EXPECT_THROW(forecast_skill(1, 0), ContractError);
}

TEST(ForecastSkill, ScaleInvariant) {
  for (double c : {0.001, 0.5, 3.0, 1e4}) EXPECT_NEAR(forecast_skill(37 * c, 81 * c), forecast_skill(37, 81), 1e-9);
}

namespace {

PredictionSet random_set(std::size_t n, std::size_t k, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0, 900);
  PredictionSet p;
  p.horizon = k;
  const auto t0 = data::parse_timestamp("2023-06-05T08:00:00");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      // Spread sequences over two days.
      p.target_time.push_back(t0 + std::chrono::seconds((i % 2) * 86400 + i * 300 + (j + 1) * 300));
      p.truth.push_back(u(rng));
      p.model.push_back(u(rng));
      p.reference.push_back(u(rng));
    }
  return p;
}

}  // namespace

TEST(Evaluate, ModelEqualsReference) {
  auto p = random_set(20, 3, 1);
  p.model = p.reference;
  const auto r = evaluate(p, 300, "m", "smart_persistence");
  ASSERT_EQ(r.horizons.size(), 3u);
  for (const auto& h : r.horizons) EXPECT_DOUBLE_EQ(h.fs_pct, 0);
  EXPECT_EQ(r.sample_count, 20u);
}

TEST(Evaluate, PerfectModel) {
  auto p = random_set(20, 3, 2);
  p.model = p.truth;
  const auto r = evaluate(p, 300, "oracle", "smart_persistence");
  for (const auto& h : r.horizons) {
    EXPECT_EQ(h.rmse_wm2, 0);
    EXPECT_DOUBLE_EQ(h.fs_pct, 100);
  }
  for (const auto& d : r.per_day) EXPECT_DOUBLE_EQ(d.fs_pct, 100);
}

TEST(Evaluate, Errors) {
  PredictionSet p;
  p.horizon = 3;
  EXPECT_THROW(evaluate(p, 300, "m", "r"), ContractError);
  auto q = random_set(4, 2, 3);
  q.model.pop_back();
  EXPECT_THROW(evaluate(q, 300, "m", "r"), ContractError);
}

// Smart persistence on a scripted clear-sky day, scored both ways and
// recomputed with independent loops.
TEST(Evaluate, SmartPersistenceScriptedDay) {
  const std::size_t n = 40, k = 3;
  auto clear = [](double h) { return std::max(0.0, 1000 * std::sin(M_PI * (h - 5) / 14)); };
  std::vector<double> hours, ghi;
  for (std::size_t i = 0; i < n + k; ++i) {
    const double h = 8 + i * 5.0 / 60;
    hours.push_back(h);
    ghi.push_back(clear(h) * (0.6 + 0.3 * std::sin(i * 0.7)));
  }
  PredictionSet p;
  p.horizon = k;
  const auto t0 = data::parse_timestamp("2023-06-07T00:00:00");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 1; j <= k; ++j) {
      p.target_time.push_back(t0 + std::chrono::seconds(static_cast<long>(hours[i + j] * 3600)));
      p.truth.push_back(ghi[i + j]);
      p.reference.push_back(clearsky::smart_persistence(ghi[i], clear(hours[i]), clear(hours[i + j])));
    }
  p.model = p.reference;
  const auto self = evaluate(p, 420, "sp", "sp");
  for (const auto& h : self.horizons) EXPECT_DOUBLE_EQ(h.fs_pct, 0);

  for (std::size_t j = 1; j <= k; ++j) {
    double ae = 0, se = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double pred = ghi[i] / clear(hours[i]) * clear(hours[i + j]);
      ae += std::fabs(pred - ghi[i + j]);
      se += (pred - ghi[i + j]) * (pred - ghi[i + j]);
    }
    const auto& h = self.horizons[j - 1];
    EXPECT_NEAR(h.mae_wm2, ae / n, 1e-9);
    EXPECT_NEAR(h.rmse_wm2, std::sqrt(se / n), 1e-9);
    EXPECT_NEAR(h.nrmse_pct, 100 * std::sqrt(se / n) / 420, 1e-9);
  }
  ASSERT_EQ(self.per_day.size(), 1u);
  EXPECT_EQ(self.per_day[0].date, "2023-06-07");
  EXPECT_EQ(self.per_day[0].count, n);
}

TEST(Evaluate, PerDayGroupsByTargetDate) {
  auto p = random_set(10, 2, 4);
  const auto r = evaluate(p, 300, "m", "r");
  ASSERT_EQ(r.per_day.size(), 2u);
  EXPECT_EQ(r.per_day[0].count + r.per_day[1].count, 10u);
  double se = 0, sr = 0;
  std::size_t c = 0;
  for (std::size_t i = 0; i < 10; i += 2) {
    const std::size_t idx = i * 2 + 1;
    se += std::pow(p.model[idx] - p.truth[idx], 2);
    sr += std::pow(p.reference[idx] - p.truth[idx], 2);
    ++c;
  }
  EXPECT_NEAR(r.per_day[0].fs_pct, 100 * (1 - std::sqrt(se / c) / std::sqrt(sr / c)), 1e-9);
}

TEST(Density, SinglePair) {
  const auto h = density_export({100}, {200}, 10, 1000);
  EXPECT_EQ(h.at(1, 2), 1u);
  EXPECT_EQ(h.total(), 1u);
}

TEST(Density, PerfectIsDiagonal) {
  std::vector<double> y;
  for (int i = 0; i <= 100; ++i) y.push_back(i * 9.5);
  const auto h = density_export(y, y, 12);
  EXPECT_EQ(h.total(), y.size());
  for (std::size_t i = 0; i < 12; ++i)
    for (std::size_t j = 0; j < 12; ++j) {
      if (i != j) {
        EXPECT_EQ(h.at(i, j), 0u);
      }
    }
}

TEST(Density, MarginalsAndEdges) {
  const auto h = density_export({0, 1000, -5, 2000}, {1000, 0, 5, 1}, 4, 1000);
  EXPECT_EQ(h.total(), 4u);
  EXPECT_EQ(h.at(0, 3), 1u);
  EXPECT_EQ(h.at(3, 0), 2u);
  EXPECT_EQ(h.at(0, 0), 1u);
}

TEST(Report, FilesWritten) {
  auto p = random_set(6, 3, 5);
  const auto r = evaluate(p, 300, "m", "smart_persistence");
  const auto dir = std::filesystem::temp_directory_path() / "skycast_metrics_test";
  std::filesystem::remove_all(dir);
  write_report_json(r, dir / "report.json");
  write_report_csv(r, dir / "report.csv");
  write_per_day_csv(r, dir / "per_day.csv");
  write_predictions_csv(p, dir / "pred.csv");
  const auto hist = density_export(p.truth, p.model, 8);
  write_histogram_csv(hist, dir / "density.csv");
  write_plot(density_plot(hist), dir / "density.png");
  write_plot(line_plot({{p.truth, {0, 0, 0}}, {p.model, {1, 0, 0}}}), dir / "line.png");
  std::ifstream f(dir / "report.json");
  const auto j = nlohmann::json::parse(f);
  EXPECT_EQ(j["sample_count"], 6);
  EXPECT_EQ(j["horizons"].size(), 3u);
  EXPECT_EQ(j["horizons"][0]["reference_name"], "smart_persistence");
  std::ifstream c(dir / "report.csv");
  std::string line;
  std::size_t lines = 0;
  while (std::getline(c, line)) ++lines;
  EXPECT_EQ(lines, 4u);
  const auto png = data::read_png(dir / "density.png");
  EXPECT_GT(png.width, 64u);
}

TEST(Plot, JetEndpoints) {
  const auto lo = jet(0), hi = jet(1), mid = jet(0.5);
  EXPECT_FLOAT_EQ(lo.b, 0.5f);
  EXPECT_FLOAT_EQ(lo.r, 0.0f);
  EXPECT_FLOAT_EQ(hi.r, 0.5f);
  EXPECT_FLOAT_EQ(hi.b, 0.0f);
  EXPECT_FLOAT_EQ(mid.g, 1.0f);
}
