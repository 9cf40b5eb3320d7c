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

#ifndef WAYPLAN_MONEY_HPP_
#define WAYPLAN_MONEY_HPP_

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace wayplan {

// Currency amount in integer cents. Whole-dollar budgets and per-cent prices
// compare exactly, which exact-match scoring relies on.
class Cents {
 public:
  constexpr Cents() = default;
  constexpr explicit Cents(std::int64_t value) : value_(value) {}
  static constexpr Cents Dollars(std::int64_t dollars) {
    return Cents(dollars * 100);
  }

  constexpr std::int64_t value() const { return value_; }
  double AsDouble() const { return static_cast<double>(value_); }

  constexpr Cents operator+(Cents o) const { return Cents(value_ + o.value_); }
  constexpr Cents operator-(Cents o) const { return Cents(value_ - o.value_); }
  constexpr Cents operator*(std::int64_t k) const { return Cents(value_ * k); }
  Cents& operator+=(Cents o) {
    value_ += o.value_;
    return *this;
  }
  constexpr auto operator<=>(const Cents&) const = default;

  // "$1383" for whole dollars, "$1383.50" otherwise.
  std::string ToDollarString() const;

 private:
  std::int64_t value_ = 0;
};

// Parses "$123" or "$123.45" at the start of `text`; returns the amount and
// the number of characters consumed.
std::optional<std::pair<Cents, std::size_t>> ParseDollarPrefix(
    std::string_view text);

// Star rating in tenths, 0..50.
class Rating {
 public:
  constexpr Rating() = default;
  constexpr explicit Rating(int tenths) : tenths_(tenths) {}
  // Accepts values within 1e-6 of a multiple of 0.1 in [0, 5].
  static std::optional<Rating> FromDouble(double stars);

  constexpr int tenths() const { return tenths_; }
  double stars() const { return tenths_ / 10.0; }
  bool IsValid() const { return tenths_ >= 0 && tenths_ <= 50; }
  // "4" or "4.5".
  std::string ToString() const;

  constexpr auto operator<=>(const Rating&) const = default;

 private:
  int tenths_ = 0;
};

}  // namespace wayplan

#endif  // WAYPLAN_MONEY_HPP_
