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

#ifndef WAYPLAN_SRC_JSON_READ_HPP_
#define WAYPLAN_SRC_JSON_READ_HPP_

// Schema-checking accessors over nlohmann::json. Every failure throws
// Error(kSchemaViolation) carrying the JSON pointer of the offending value.

#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>

#include "json.hpp"
#include "wayplan/calendar.hpp"
#include "wayplan/error.hpp"
#include "wayplan/money.hpp"

namespace wayplan::json_read {

using nlohmann::json;

[[noreturn]] inline void Fail(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::kSchemaViolation,
              (path.empty() ? std::string("/") : path) + ": " + what, path);
}

inline std::string Child(const std::string& path, std::string_view key) {
  return path + "/" + std::string(key);
}
inline std::string Child(const std::string& path, std::size_t index) {
  return path + "/" + std::to_string(index);
}

inline const json& Object(const json& j, const std::string& path,
                          std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) Fail(path, "expected object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (auto a : allowed) known = known || a == key;
    if (!known) Fail(Child(path, key), "unknown field");
  }
  return j;
}

inline const json* Find(const json& obj, std::string_view key) {
  auto it = obj.find(std::string(key));
  if (it == obj.end() || it->is_null()) return nullptr;
  return &*it;
}

inline const json& Require(const json& obj, std::string_view key,
                           const std::string& path) {
  const json* v = Find(obj, key);
  if (v == nullptr) Fail(Child(path, key), "missing required field");
  return *v;
}

inline const json& Array(const json& j, const std::string& path) {
  if (!j.is_array()) Fail(path, "expected array");
  return j;
}

inline std::string String(const json& j, const std::string& path) {
  if (!j.is_string()) Fail(path, "expected string");
  return j.get<std::string>();
}

inline bool Bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) Fail(path, "expected boolean");
  return j.get<bool>();
}

inline std::int64_t Integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) Fail(path, "expected integer");
  return j.get<std::int64_t>();
}

inline double Number(const json& j, const std::string& path) {
  if (!j.is_number()) Fail(path, "expected number");
  return j.get<double>();
}

inline Cents Money(const json& j, const std::string& path) {
  if (!j.is_number_integer()) Fail(path, "expected integer amount in cents");
  return Cents(j.get<std::int64_t>());
}

inline Date ReadDate(const json& j, const std::string& path) {
  const auto d = Date::Parse(String(j, path));
  if (!d) Fail(path, "expected date YYYY-MM-DD");
  return *d;
}

inline DateTime ReadDateTime(const json& j, const std::string& path) {
  const auto d = DateTime::Parse(String(j, path));
  if (!d) Fail(path, "expected date-time YYYY-MM-DDTHH:MM");
  return *d;
}

inline int TimeOfDay(const json& j, const std::string& path) {
  const auto t = ParseTimeOfDay(String(j, path));
  if (!t) Fail(path, "expected time HH:MM");
  return *t;
}

inline Rating ReadRating(const json& j, const std::string& path) {
  const auto r = Rating::FromDouble(Number(j, path));
  if (!r) Fail(path, "expected rating in [0,5] with one decimal");
  return *r;
}

inline json ParseText(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kMalformedJson, e.what());
  }
}

}  // namespace wayplan::json_read

#endif  // WAYPLAN_SRC_JSON_READ_HPP_
