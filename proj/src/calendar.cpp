// Copyright 2026 The Wayplan Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "wayplan/calendar.hpp"

#include <charconv>

#include <fmt/format.h>

namespace wayplan {
namespace {

bool ParseFixedInt(std::string_view text, std::size_t pos, std::size_t len,
                   int& out) {
  if (pos + len > text.size()) return false;
  for (std::size_t i = pos; i < pos + len; ++i) {
    if (text[i] < '0' || text[i] > '9') return false;
  }
  auto [ptr, ec] =
      std::from_chars(text.data() + pos, text.data() + pos + len, out);
  return ec == std::errc() && ptr == text.data() + pos + len;
}

}  // namespace

Date Date::FromYmd(int year, unsigned month, unsigned day) {
  const std::chrono::sys_days days = std::chrono::year_month_day{
      std::chrono::year{year}, std::chrono::month{month},
      std::chrono::day{day}};
  return Date(static_cast<std::int32_t>(days.time_since_epoch().count()));
}

std::optional<Date> Date::Parse(std::string_view text) {
  int y = 0, m = 0, d = 0;
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  if (!ParseFixedInt(text, 0, 4, y) || !ParseFixedInt(text, 5, 2, m) ||
      !ParseFixedInt(text, 8, 2, d)) {
    return std::nullopt;
  }
  const std::chrono::year_month_day ymd{std::chrono::year{y},
                                        std::chrono::month{unsigned(m)},
                                        std::chrono::day{unsigned(d)}};
  if (!ymd.ok()) return std::nullopt;
  return FromYmd(y, unsigned(m), unsigned(d));
}

std::chrono::year_month_day Date::ymd() const {
  return std::chrono::year_month_day{
      std::chrono::sys_days{std::chrono::days{days_}}};
}

int Date::year() const { return int(ymd().year()); }
unsigned Date::month() const { return unsigned(ymd().month()); }
unsigned Date::day() const { return unsigned(ymd().day()); }

std::string Date::ToString() const {
  return fmt::format("{:04d}-{:02d}-{:02d}", year(), month(), day());
}

std::optional<DateTime> DateTime::Parse(std::string_view text) {
  if (text.size() < 16) return std::nullopt;
  const auto date = Date::Parse(text.substr(0, 10));
  if (!date || (text[10] != 'T' && text[10] != ' ') || text[13] != ':') {
    return std::nullopt;
  }
  int h = 0, m = 0;
  if (!ParseFixedInt(text, 11, 2, h) || !ParseFixedInt(text, 14, 2, m) ||
      h > 23 || m > 59) {
    return std::nullopt;
  }
  std::string_view rest = text.substr(16);
  if (!rest.empty() && rest[0] == ':') {
    int s = 0;
    if (!ParseFixedInt(rest, 1, 2, s) || s > 59) return std::nullopt;
    rest.remove_prefix(3);
  }
  // Fractional seconds and zone designators carry no meaning for naive times.
  if (!rest.empty() && rest[0] != '.' && rest[0] != 'Z' && rest[0] != '+' &&
      rest[0] != '-') {
    return std::nullopt;
  }
  return DateTime::At(*date, h * 60 + m);
}

Date DateTime::date() const {
  std::int64_t days = minutes_ / kMinutesPerDay;
  if (minutes_ % kMinutesPerDay < 0) --days;
  return Date(static_cast<std::int32_t>(days));
}

int DateTime::minute_of_day() const {
  const auto r = static_cast<int>(minutes_ % kMinutesPerDay);
  return r < 0 ? r + kMinutesPerDay : r;
}

std::string DateTime::ToString() const {
  const int mod = minute_of_day();
  return fmt::format("{}T{:02d}:{:02d}", date().ToString(), mod / 60, mod % 60);
}

std::optional<int> ParseTimeOfDay(std::string_view text) {
  int h = 0, m = 0;
  if (text.size() != 5 || text[2] != ':' || !ParseFixedInt(text, 0, 2, h) ||
      !ParseFixedInt(text, 3, 2, m) || m > 59) {
    return std::nullopt;
  }
  const int total = h * 60 + m;
  if (total > kMinutesPerDay) return std::nullopt;
  return total;
}

std::string FormatTimeOfDay(int minute_of_day) {
  return fmt::format("{:02d}:{:02d}", minute_of_day / 60, minute_of_day % 60);
}

}  // namespace wayplan
