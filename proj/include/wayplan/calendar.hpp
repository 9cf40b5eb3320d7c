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

#ifndef WAYPLAN_CALENDAR_HPP_
#define WAYPLAN_CALENDAR_HPP_

#include <chrono>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace wayplan {

inline constexpr int kMinutesPerDay = 24 * 60;

// Calendar date as days since 1970-01-01. No time zone.
class Date {
 public:
  constexpr Date() = default;
  constexpr explicit Date(std::int32_t days_since_epoch)
      : days_(days_since_epoch) {}

  static Date FromYmd(int year, unsigned month, unsigned day);
  // Strict "YYYY-MM-DD"; nullopt on malformed or impossible dates.
  static std::optional<Date> Parse(std::string_view text);

  std::int32_t days_since_epoch() const { return days_; }
  std::chrono::year_month_day ymd() const;
  int year() const;
  unsigned month() const;
  unsigned day() const;

  Date operator+(int days) const { return Date(days_ + days); }
  Date operator-(int days) const { return Date(days_ - days); }
  int operator-(Date other) const { return days_ - other.days_; }

  std::string ToString() const;

  auto operator<=>(const Date&) const = default;

 private:
  std::int32_t days_ = 0;
};

// Naive local date-time at minute resolution.
class DateTime {
 public:
  constexpr DateTime() = default;
  constexpr explicit DateTime(std::int64_t minutes_since_epoch)
      : minutes_(minutes_since_epoch) {}
  static DateTime At(Date date, int minute_of_day) {
    return DateTime(std::int64_t{date.days_since_epoch()} * kMinutesPerDay +
                    minute_of_day);
  }
  // "YYYY-MM-DDTHH:MM", also accepts a space separator, ":SS" seconds and a
  // trailing fraction/offset, which are ignored.
  static std::optional<DateTime> Parse(std::string_view text);

  std::int64_t minutes_since_epoch() const { return minutes_; }
  Date date() const;
  int minute_of_day() const;

  DateTime operator+(std::int64_t minutes) const {
    return DateTime(minutes_ + minutes);
  }
  std::int64_t operator-(DateTime other) const {
    return minutes_ - other.minutes_;
  }

  std::string ToString() const;

  auto operator<=>(const DateTime&) const = default;

 private:
  std::int64_t minutes_ = 0;
};

// "HH:MM" with 00:00..24:00; returns minutes from midnight.
std::optional<int> ParseTimeOfDay(std::string_view text);
std::string FormatTimeOfDay(int minute_of_day);

// Half-open [start, end) minutes-from-midnight window.
struct TimeWindow {
  int start = 0;
  int end = kMinutesPerDay;

  bool Contains(int minute_of_day) const {
    return minute_of_day >= start && minute_of_day < end;
  }
  bool IsValid() const { return 0 <= start && start < end && end <= kMinutesPerDay; }
  auto operator<=>(const TimeWindow&) const = default;
};

}  // namespace wayplan

#endif  // WAYPLAN_CALENDAR_HPP_
