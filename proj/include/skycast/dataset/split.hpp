// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The skycast Authors
#pragma once

#include <vector>

#include "skycast/dataset/sample.hpp"

namespace skycast::data {

struct SplitSets {
  std::vector<Sample> train, val, test;

  const std::vector<Sample>& get(Split s) const {
    return s == Split::train ? train : s == Split::val ? val : test;
  }
};

/// Day of month 5..9 is test, 15..19 is validation, everything else train.
inline Split split_for_day(unsigned day_of_month) {
  if (day_of_month >= 5 && day_of_month <= 9) return Split::test;
  if (day_of_month >= 15 && day_of_month <= 19) return Split::val;
  return Split::train;
}

inline SplitSets split_by_day(const std::vector<Sample>& samples, int utc_offset_minutes = 0) {
  SplitSets out;
  for (Sample s : samples) {
    s.split = split_for_day(local_time(s.timestamp, utc_offset_minutes).day);
    (s.split == Split::train ? out.train : s.split == Split::val ? out.val : out.test).push_back(std::move(s));
  }
  return out;
}

}  // namespace skycast::data
