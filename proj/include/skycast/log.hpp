// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The skycast Authors
#pragma once

#include <iostream>
#include <string_view>

namespace skycast {

enum class LogLevel { quiet = 0, warn = 1, info = 2 };

inline LogLevel& log_level() {
  static LogLevel level = LogLevel::warn;
  return level;
}

inline void log_info(std::string_view msg) {
  if (log_level() >= LogLevel::info) std::clog << "[info] " << msg << '\n';
}

inline void log_warn(std::string_view msg) {
  if (log_level() >= LogLevel::warn) std::clog << "[warn] " << msg << '\n';
}

}  // namespace skycast
