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

#include "wayplan/money.hpp"

#include <cctype>
#include <cmath>

#include <fmt/format.h>

namespace wayplan {

std::string Cents::ToDollarString() const {
  const std::int64_t abs = value_ < 0 ? -value_ : value_;
  const char* sign = value_ < 0 ? "-" : "";
  if (abs % 100 == 0) return fmt::format("{}${}", sign, abs / 100);
  return fmt::format("{}${}.{:02d}", sign, abs / 100, abs % 100);
}

std::optional<std::pair<Cents, std::size_t>> ParseDollarPrefix(
    std::string_view text) {
  if (text.empty() || text[0] != '$') return std::nullopt;
  std::size_t pos = 1;
  std::int64_t dollars = 0;
  const std::size_t digits_begin = pos;
  while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
    if (pos - digits_begin >= 12) return std::nullopt;
    dollars = dollars * 10 + (text[pos] - '0');
    ++pos;
  }
  if (pos == digits_begin) return std::nullopt;
  std::int64_t cents = 0;
  const auto is_digit = [&](std::size_t i) {
    return std::isdigit(static_cast<unsigned char>(text[i])) != 0;
  };
  if (text.size() >= pos + 3 && text[pos] == '.' && is_digit(pos + 1) &&
      is_digit(pos + 2)) {
    cents = (text[pos + 1] - '0') * 10 + (text[pos + 2] - '0');
    pos += 3;
  }
  return std::pair{Cents(dollars * 100 + cents), pos};
}

std::optional<Rating> Rating::FromDouble(double stars) {
  if (!std::isfinite(stars)) return std::nullopt;
  const double scaled = stars * 10.0;
  const double rounded = std::round(scaled);
  if (std::abs(scaled - rounded) > 1e-6) return std::nullopt;
  Rating r(static_cast<int>(rounded));
  if (!r.IsValid()) return std::nullopt;
  return r;
}

std::string Rating::ToString() const {
  if (tenths_ % 10 == 0) return fmt::format("{}", tenths_ / 10);
  return fmt::format("{}.{}", tenths_ / 10, tenths_ % 10);
}

}  // namespace wayplan
