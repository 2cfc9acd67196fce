// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The skycast Authors
//
// skycast: prepare data, train, evaluate, ablate and explain.
// Exit codes: 0 success, 2 input or configuration error, 3 missing
// prerequisite, 4 internal or numeric failure.
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "skycast/cli.hpp"

using namespace skycast;

namespace {

int run_guarded(const std::function<void()>& fn) {
  try {
    fn();
    return 0;
  } catch (const MissingPrerequisite& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return 4;
  } catch (const ContractError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 4;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  } catch (const ShapeError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 4;
  }
}

std::vector<std::uint64_t> parse_seeds(const std::string& list) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(std::stoull(item));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"skycast: sky-image irradiance forecasting"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  bool verbose = false, quiet = false;
  app.add_flag("-v,--verbose", verbose, "Progress messages");
  app.add_flag("-q,--quiet", quiet, "Errors only");

  auto* prepare = app.add_subcommand("prepare", "Build manifests and normalization stats");
  auto* train = app.add_subcommand("train", "Run training stages");
  auto* eval = app.add_subcommand("eval", "Score the trained model on the test split");
  auto* ablate = app.add_subcommand("ablate", "Run an ablation grid");
  auto* explain = app.add_subcommand("explain", "Attention-rollout heatmaps");
  for (auto* sub : {prepare, train, eval, ablate, explain})
    sub->add_option("-c,--config", config_path, "Run configuration JSON")->required();

  std::string stage = "all";
  train->add_option("--stage", stage, "1, 2, 3 or all")->check(CLI::IsMember({"1", "2", "3", "all"}));

  std::string reference = "smart";
  std::size_t steps = 3;
  eval->add_option("--reference", reference, "smart or backbone")->check(CLI::IsMember({"smart", "backbone"}));
  eval->add_option("--steps", steps, "Forecast horizon k")->check(CLI::PositiveNumber);

  std::string grid, seeds;
  ablate->add_option("--grid", grid, "loss-components, context, training-loss, stages or backbone")->required();
  ablate->add_option("--seeds", seeds, "Comma-separated seeds (default: the config seed)");

  std::vector<std::string> images;
  int explain_stage = 3;
  std::string fusion;
  double discard = -1;
  explain->add_option("--images", images, "Images to explain; use a,b for an exposure pair");
  explain->add_option("--checkpoint-stage", explain_stage, "Backbone from stage 1 or 3")->check(CLI::IsMember({1, 3}));
  explain->add_option("--head-fusion", fusion, "mean, max or min")->check(CLI::IsMember({"mean", "max", "min"}));
  explain->add_option("--discard-ratio", discard, "Fraction of lowest attention entries to drop");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  log_level() = quiet ? LogLevel::quiet : verbose ? LogLevel::info : LogLevel::warn;

  return run_guarded([&] {
    const auto cfg_in = cli::load_run_config(config_path);
    auto cfg = cfg_in;
    if (*prepare) {
      const auto rep = cli::cmd_prepare(cfg);
      std::cout << data::to_json(rep).dump(2) << '\n';
    } else if (*train) {
      cli::cmd_train(cfg, cli::parse_stages(stage, cfg));
    } else if (*eval) {
      const auto rep = cli::cmd_eval(cfg, training::parse_reference(reference), steps);
      std::cout << metrics::to_json(rep)["horizons"].dump(2) << '\n';
    } else if (*ablate) {
      const auto known = training::ablation_grid_names();
      if (std::find(known.begin(), known.end(), grid) == known.end())
        throw ConfigError("unknown grid '" + grid + "'");
      const auto rows = cli::cmd_ablate(cfg, grid, parse_seeds(seeds));
      for (const auto& [label, fs] : training::mean_fs_by_label(rows)) std::printf("%-28s FS %.2f %%\n", label.c_str(), fs);
    } else if (*explain) {
      if (!fusion.empty()) cfg.explain.head_fusion = explain::parse_head_fusion(fusion);
      if (discard >= 0) cfg.explain.discard_ratio = discard;
      cfg.explain.validate();
      cli::cmd_explain(cfg, images, explain_stage);
    }
  });
}
