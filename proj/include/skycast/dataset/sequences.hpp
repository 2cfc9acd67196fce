// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The skycast Authors
#pragma once

#include <chrono>
#include <vector>

#include "skycast/dataset/sample.hpp"

namespace skycast::data {

/// A window of s context samples followed by k future samples. Members are
/// indices into the sample vector the sequence was built from.
struct SequenceSample {
  std::vector<std::size_t> members;  // s + k indices, time ordered
  std::size_t context = 0;
  std::size_t horizon = 0;
  std::vector<double> horizon_targets;  // irradiance of the k future members
  double cadence_minutes = 0;
};

struct SequenceOptions {
  std::size_t context = 5;
  std::size_t horizon = 3;
  double cadence_minutes = 5.0;
  double tolerance = 0.2;  // fraction of the cadence
  std::size_t stride = 1;
};

/// Enumerates sliding windows over runs of samples whose consecutive gaps
/// stay within cadence * (1 +- tolerance) and that share one split.
inline std::vector<SequenceSample> make_sequences(const std::vector<Sample>& samples, const SequenceOptions& opt) {
  if (opt.context < 1 || opt.horizon < 1) throw ConfigError("make_sequences: context and horizon must be >= 1");
  if (opt.stride < 1) throw ConfigError("make_sequences: stride must be >= 1");
  if (!(opt.cadence_minutes > 0) || opt.tolerance < 0 || opt.tolerance >= 1)
    throw ConfigError("make_sequences: invalid cadence or tolerance");
  for (std::size_t i = 1; i < samples.size(); ++i)
    if (samples[i].timestamp <= samples[i - 1].timestamp)
      throw ContractError("make_sequences: samples must be strictly increasing in time");

  const double lo = opt.cadence_minutes * 60.0 * (1.0 - opt.tolerance);
  const double hi = opt.cadence_minutes * 60.0 * (1.0 + opt.tolerance);
  const std::size_t len = opt.context + opt.horizon;
  std::vector<SequenceSample> out;
  std::size_t run_start = 0;
  for (std::size_t i = 1; i <= samples.size(); ++i) {
    bool breaks = i == samples.size();
    if (!breaks) {
      const double gap = epoch_seconds(samples[i].timestamp) - epoch_seconds(samples[i - 1].timestamp);
      breaks = gap < lo || gap > hi || samples[i].split != samples[i - 1].split;
    }
    if (!breaks) continue;
    for (std::size_t s = run_start; s + len <= i; s += opt.stride) {
      SequenceSample seq;
      seq.context = opt.context;
      seq.horizon = opt.horizon;
      seq.cadence_minutes = opt.cadence_minutes;
      for (std::size_t j = 0; j < len; ++j) seq.members.push_back(s + j);
      for (std::size_t j = opt.context; j < len; ++j) seq.horizon_targets.push_back(samples[s + j].irradiance_wm2);
      out.push_back(std::move(seq));
    }
    run_start = i;
  }
  return out;
}

}  // namespace skycast::data
