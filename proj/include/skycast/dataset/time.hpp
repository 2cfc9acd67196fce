// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The skycast Authors
#pragma once

#include <chrono>
#include <cstdio>
#include <string>
#include <string_view>

#include "skycast/numcore/errors.hpp"

namespace skycast::data {

using Timestamp = std::chrono::sys_seconds;

/// Accepts "YYYY-MM-DDTHH:MM:SS" with an optional trailing "Z" (UTC only),
/// also "YYYY-MM-DD HH:MM:SS" and compact "YYYYMMDDHHMMSS".
inline Timestamp parse_timestamp(std::string_view text) {
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
  std::string buf(text);
  bool ok = false;
  if (buf.size() >= 19 && (buf[10] == 'T' || buf[10] == ' ')) {
    ok = std::sscanf(buf.c_str(), "%4d-%2d-%2d%*c%2d:%2d:%2d", &y, &mo, &d, &h, &mi, &s) == 6;
    if (buf.size() > 19 && !(buf.size() == 20 && buf[19] == 'Z')) ok = false;
  } else if (buf.size() == 14) {
    ok = std::sscanf(buf.c_str(), "%4d%2d%2d%2d%2d%2d", &y, &mo, &d, &h, &mi, &s) == 6;
  }
  using namespace std::chrono;
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ok || !ymd.ok() || h < 0 || h > 23 || mi < 0 || mi > 59 || s < 0 || s > 60)
    throw InputError("malformed timestamp '" + buf + "'");
  return sys_days{ymd} + hours{h} + minutes{mi} + seconds{s};
}

inline std::string format_timestamp(Timestamp t) {
  using namespace std::chrono;
  const auto day_start = floor<days>(t);
  const year_month_day ymd{day_start};
  const hh_mm_ss hms{t - day_start};
  char out[64];
  std::snprintf(out, sizeof out, "%04d-%02u-%02uT%02ld:%02ld:%02ldZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<long>(hms.hours().count()), static_cast<long>(hms.minutes().count()),
                static_cast<long>(hms.seconds().count()));
  return out;
}

/// Compact form used in image file names.
inline std::string compact_timestamp(Timestamp t) {
  std::string iso = format_timestamp(t);
  std::string out;
  for (char c : iso)
    if (c >= '0' && c <= '9') out.push_back(c);
  return out;
}

/// Wall-clock breakdown at a fixed UTC offset (site local time).
struct LocalTime {
  int year = 0;
  unsigned month = 0, day = 0;
  int hour = 0, minute = 0, second = 0;
};

inline LocalTime local_time(Timestamp t, int utc_offset_minutes = 0) {
  using namespace std::chrono;
  const auto lt = t + minutes{utc_offset_minutes};
  const auto day_start = floor<days>(lt);
  const year_month_day ymd{day_start};
  const hh_mm_ss hms{lt - day_start};
  return {static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
          static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
          static_cast<int>(hms.seconds().count())};
}

/// Seconds since the Unix epoch as a real.
inline double epoch_seconds(Timestamp t) { return static_cast<double>(t.time_since_epoch().count()); }

/// Days since the Unix epoch of the local calendar date; used as a day key.
inline long local_day_key(Timestamp t, int utc_offset_minutes = 0) {
  using namespace std::chrono;
  return static_cast<long>(floor<days>(t + minutes{utc_offset_minutes}).time_since_epoch().count());
}

}  // namespace skycast::data
