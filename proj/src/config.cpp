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

#include "wayplan/config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "wayplan/error.hpp"

namespace wayplan {
namespace {

[[noreturn]] void Bad(std::string_view key, const std::string& what) {
  throw Error(ErrorCode::kInvalidConfig, fmt::format("{}: {}", key, what), std::string(key));
}

std::int64_t ToInt(std::string_view key, std::string_view v) {
  std::int64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) Bad(key, fmt::format("'{}' is not an integer", v));
  return out;
}

std::uint64_t ToUnsigned(std::string_view key, std::string_view v) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    Bad(key, fmt::format("'{}' is not a non-negative integer", v));
  }
  return out;
}

int ToInt32(std::string_view key, std::string_view v) {
  const std::int64_t x = ToInt(key, v);
  if (x < INT32_MIN || x > INT32_MAX) Bad(key, "out of range");
  return static_cast<int>(x);
}

double ToDouble(std::string_view key, std::string_view v) {
  double out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) Bad(key, fmt::format("'{}' is not a number", v));
  return out;
}

bool ToBool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  Bad(key, fmt::format("'{}' is not a boolean", v));
}

// "HH:MM", 00:00..24:00.
int ToClock(std::string_view key, std::string_view v) {
  if (v.size() == 5 && v[2] == ':') {
    const int h = ToInt32(key, v.substr(0, 2));
    const int m = ToInt32(key, v.substr(3, 2));
    if (h >= 0 && m >= 0 && m < 60 && h * 60 + m <= kMinutesPerDay) return h * 60 + m;
  }
  Bad(key, fmt::format("'{}' is not a HH:MM time", v));
}

using Setter = std::function<void(Config&, std::string_view key, std::string_view value)>;

const std::map<std::string, Setter, std::less<>>& Setters() {
  static const auto* kSetters = new std::map<std::string, Setter, std::less<>>{
      {"seed", [](Config& c, auto k, auto v) { c.seed = ToUnsigned(k, v); }},
      {"model.slot_minutes", [](Config& c, auto k, auto v) { c.model.grid.slot_minutes = ToInt32(k, v); }},
      {"model.max_span_days", [](Config& c, auto k, auto v) { c.model.grid.max_span_days = ToInt32(k, v); }},
      {"model.night_start", [](Config& c, auto k, auto v) { c.model.grid.night_start = ToClock(k, v); }},
      {"model.night_end", [](Config& c, auto k, auto v) { c.model.grid.night_end = ToClock(k, v); }},
      {"model.min_sleep_slots", [](Config& c, auto k, auto v) { c.model.min_sleep_slots = ToInt32(k, v); }},
      {"model.big_m", [](Config& c, auto k, auto v) { c.model.big_m = ToDouble(k, v); }},
      {"model.mode",
       [](Config& c, auto k, auto v) {
         auto mode = ParseObjectiveMode(v);
         if (!mode) Bad(k, fmt::format("unknown mode '{}'", v));
         c.model.mode = *mode;
       }},
      {"model.soft_penalty_per_slot_cents",
       [](Config& c, auto k, auto v) { c.model.soft_penalty_per_slot = Cents(ToInt(k, v)); }},
      {"model.hotel_rating_bonus_cents",
       [](Config& c, auto k, auto v) { c.model.hotel_rating_bonus = Cents(ToInt(k, v)); }},
      {"model.flight_quality_bonus_cents",
       [](Config& c, auto k, auto v) { c.model.flight_quality_bonus = Cents(ToInt(k, v)); }},
      {"model.red_eye_start", [](Config& c, auto k, auto v) { c.model.red_eye_start = ToClock(k, v); }},
      {"model.red_eye_end", [](Config& c, auto k, auto v) { c.model.red_eye_end = ToClock(k, v); }},
      {"weights.better_hotel.flight",
       [](Config& c, auto k, auto v) { c.model.better_hotel.flight = ToDouble(k, v); }},
      {"weights.better_hotel.hotel",
       [](Config& c, auto k, auto v) { c.model.better_hotel.hotel = ToDouble(k, v); }},
      {"weights.better_flight.flight",
       [](Config& c, auto k, auto v) { c.model.better_flight.flight = ToDouble(k, v); }},
      {"weights.better_flight.hotel",
       [](Config& c, auto k, auto v) { c.model.better_flight.hotel = ToDouble(k, v); }},
      {"solver.time_limit_ms", [](Config& c, auto k, auto v) { c.solver.time_limit_ms = ToInt(k, v); }},
      {"solver.node_limit", [](Config& c, auto k, auto v) { c.solver.node_limit = ToInt(k, v); }},
      {"solver.branch_order",
       [](Config& c, auto k, auto v) {
         if (v == "objective") c.solver.branch_order = BranchOrder::kObjectiveDescending;
         else if (v == "index") c.solver.branch_order = BranchOrder::kIndexAscending;
         else Bad(k, fmt::format("'{}' is not objective or index", v));
       }},
      {"translator.backend", [](Config& c, auto, auto v) { c.translator = std::string(v); }},
      {"translator.model", [](Config& c, auto, auto v) { c.endpoint.model = std::string(v); }},
      {"translator.timeout_ms", [](Config& c, auto k, auto v) { c.endpoint.timeout_ms = ToInt32(k, v); }},
      {"translator.max_retries", [](Config& c, auto k, auto v) { c.endpoint.max_retries = ToInt32(k, v); }},
      {"translator.system_prompt", [](Config& c, auto, auto v) { c.endpoint.system_prompt = std::string(v); }},
      {"gen.one_way_fraction", [](Config& c, auto k, auto v) { c.gen.one_way_fraction = ToDouble(k, v); }},
      {"gen.three_city_fraction",
       [](Config& c, auto k, auto v) { c.gen.three_city_fraction = ToDouble(k, v); }},
      {"gen.price_noise_sigma", [](Config& c, auto k, auto v) { c.gen.price_noise_sigma = ToDouble(k, v); }},
      {"gen.flag_true_probability",
       [](Config& c, auto k, auto v) { c.gen.flag_true_probability = ToDouble(k, v); }},
      {"gen.flights_per_leg_min", [](Config& c, auto k, auto v) { c.gen.flights_per_leg.lo = ToInt32(k, v); }},
      {"gen.flights_per_leg_max", [](Config& c, auto k, auto v) { c.gen.flights_per_leg.hi = ToInt32(k, v); }},
      {"gen.hotels_per_city_min", [](Config& c, auto k, auto v) { c.gen.hotels_per_city.lo = ToInt32(k, v); }},
      {"gen.hotels_per_city_max", [](Config& c, auto k, auto v) { c.gen.hotels_per_city.hi = ToInt32(k, v); }},
      {"service.host", [](Config& c, auto, auto v) { c.service.host = std::string(v); }},
      {"service.port", [](Config& c, auto k, auto v) { c.service.port = ToInt32(k, v); }},
      {"service.dataset", [](Config& c, auto, auto v) { c.service.dataset = std::string(v); }},
      {"service.inventory", [](Config& c, auto, auto v) { c.service.inventory = std::string(v); }},
      {"service.session_log", [](Config& c, auto, auto v) { c.service.session_log = std::string(v); }},
      {"service.parallel_modes", [](Config& c, auto k, auto v) { c.service.parallel_modes = ToBool(k, v); }},
      {"service.threads", [](Config& c, auto k, auto v) { c.service.threads = ToInt32(k, v); }},
  };
  return *kSetters;
}

std::string_view Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Strips a trailing comment outside quotes.
std::string_view StripComment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

}  // namespace

const std::vector<std::string>& ConfigKeys() {
  static const std::vector<std::string> kKeys = [] {
    std::vector<std::string> keys;
    for (const auto& [k, _] : Setters()) keys.push_back(k);
    return keys;
  }();
  return kKeys;
}

void SetConfigValue(Config& config, std::string_view key, std::string_view value) {
  const auto it = Setters().find(key);
  if (it == Setters().end()) Bad(key, "unknown configuration key");
  it->second(config, key, value);
}

void LoadConfigText(Config& config, std::string_view text, std::string_view origin) {
  std::string section;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = Trim(StripComment(text.substr(pos, end - pos)));
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;
    const std::string where = fmt::format("{}:{}", origin, line_no);
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        throw Error(ErrorCode::kInvalidConfig, where + ": malformed section header", where);
      }
      section = std::string(Trim(line.substr(1, line.size() - 2))) + ".";
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kInvalidConfig, where + ": expected 'key = value'", where);
    }
    const std::string key = section + std::string(Trim(line.substr(0, eq)));
    std::string_view value = Trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    try {
      SetConfigValue(config, key, value);
    } catch (const Error& e) {
      throw Error(ErrorCode::kInvalidConfig, fmt::format("{}: {}", where, e.what()), key);
    }
  }
}

void LoadConfigFile(Config& config, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kInvalidConfig, "cannot read config file '" + path + "'", path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  LoadConfigText(config, buffer.str(), path);
}

std::string EnvVarName(std::string_view key) {
  std::string name = "WAYPLAN_";
  for (char c : key) name += c == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return name;
}

void ApplyEnvironment(Config& config, const EnvLookup& lookup) {
  for (const std::string& key : ConfigKeys()) {
    const std::string name = EnvVarName(key);
    if (const char* value = lookup(name.c_str())) {
      try {
        SetConfigValue(config, key, value);
      } catch (const Error& e) {
        throw Error(ErrorCode::kInvalidConfig, fmt::format("{}: {}", name, e.what()), key);
      }
    }
  }
}

void ValidateConfig(const Config& config) {
  auto wrap = [](std::string_view prefix, auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      const std::string path = e.path().empty() ? std::string(prefix)
                                                : fmt::format("{}.{}", prefix, e.path());
      throw Error(ErrorCode::kInvalidConfig, fmt::format("{}: {}", path, e.what()), path);
    }
  };
  wrap("model", [&] { ValidateModelParams(config.model); });
  wrap("solver", [&] { ValidateSolverConfig(config.solver); });
  wrap("gen", [&] { ValidateGenParams(config.gen); });
  wrap("translator", [&] { ValidateBackend(BackendOf(config)); });
  const ServiceSettings& s = config.service;
  if (s.port < 0 || s.port > 65535) Bad("service.port", "must be in [0, 65535]");
  if (s.threads < 1) Bad("service.threads", "must be >= 1");
  if (s.inventory != "dataset" && s.inventory != "generated") {
    Bad("service.inventory", "must be 'dataset' or 'generated'");
  }
}

TranslatorBackend BackendOf(const Config& config) {
  if (config.translator == "template") return TranslatorBackend::Template();
  if (config.translator.starts_with("endpoint:")) {
    ExternalEndpoint ep = config.endpoint;
    ep.url = config.translator.substr(9);
    return TranslatorBackend::External(std::move(ep));
  }
  Bad("translator.backend", fmt::format("'{}' is not template or endpoint:URL", config.translator));
}

nlohmann::ordered_json ConfigToJson(const Config& c) {
  nlohmann::ordered_json j;
  j["seed"] = c.seed;
  j["model"] = {{"slot_minutes", c.model.grid.slot_minutes},
                {"max_span_days", c.model.grid.max_span_days},
                {"min_sleep_slots", c.model.min_sleep_slots},
                {"mode", ObjectiveModeName(c.model.mode)},
                {"soft_penalty_per_slot_cents", c.model.soft_penalty_per_slot.value()}};
  j["weights"] = {{"better_hotel", {{"flight", c.model.better_hotel.flight},
                                    {"hotel", c.model.better_hotel.hotel}}},
                  {"better_flight", {{"flight", c.model.better_flight.flight},
                                     {"hotel", c.model.better_flight.hotel}}}};
  j["solver"] = {{"time_limit_ms", c.solver.time_limit_ms}, {"node_limit", c.solver.node_limit}};
  j["translator"] = {{"backend", c.translator}, {"model", c.endpoint.model},
                     {"timeout_ms", c.endpoint.timeout_ms}, {"max_retries", c.endpoint.max_retries}};
  j["service"] = {{"host", c.service.host},         {"port", c.service.port},
                  {"dataset", c.service.dataset},   {"inventory", c.service.inventory},
                  {"session_log", c.service.session_log},
                  {"parallel_modes", c.service.parallel_modes}, {"threads", c.service.threads}};
  return j;
}

}  // namespace wayplan
