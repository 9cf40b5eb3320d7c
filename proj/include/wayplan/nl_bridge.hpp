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

#ifndef WAYPLAN_NL_BRIDGE_HPP_
#define WAYPLAN_NL_BRIDGE_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wayplan/calendar.hpp"
#include "wayplan/money.hpp"
#include "wayplan/request.hpp"

namespace wayplan {

// Paraphrase variants per sentence family and per clause.
inline constexpr int kParaphraseVariants = 4;

// English rendering of `request`. Seeds 0..3 select one variant for every
// clause; larger seeds mix variants across clauses.
std::string RenderNl(const SymbolicRequest& request, std::uint64_t variant_seed);

// Inverse of RenderNl for any seed. Throws UnparsableSegment (with the span
// of the offending sentence or clause) or MissingLegs.
SymbolicRequest ParseNl(std::string_view text);

// Slot-level helpers, exposed for tests.
std::string FormatLongDate(Date date);            // "January 15th, 2025"
std::string FormatClock(int minute_of_day);       // "8:00 AM", "midnight" for 24:00
std::optional<int> ParseClock(std::string_view text);
std::optional<Date> ParseLongDate(std::string_view text);

struct ExternalEndpoint {
  std::string url;  // http://host:port/path
  std::string model;
  int timeout_ms = 30000;
  int max_retries = 2;
  std::string system_prompt =
      "Convert the travel request into a single JSON object following the "
      "canonical request schema. Output JSON only.";
};

struct TranslatorBackend {
  enum class Kind { kTemplateParser, kExternalEndpoint };
  Kind kind = Kind::kTemplateParser;
  ExternalEndpoint endpoint;

  static TranslatorBackend Template() { return {}; }
  static TranslatorBackend External(ExternalEndpoint endpoint) {
    return {Kind::kExternalEndpoint, std::move(endpoint)};
  }
};

void ValidateBackend(const TranslatorBackend& backend);

// Sends one request body and returns the response body. Implementations
// throw Error(kEndpointUnreachable) on transport failure.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual std::string Post(const ExternalEndpoint& endpoint, const std::string& body) = 0;
};

std::unique_ptr<Transport> MakeHttpTransport();

// Body sent to an external translator: {model, system_prompt, user_text}.
std::string TranslatorRequestBody(const ExternalEndpoint& endpoint, std::string_view text);

struct Translation {
  SymbolicRequest request;
  std::string raw_output;
  bool valid_json = true;  // first attempt parsed and validated
  int attempts = 1;
};

// `transport` is only used by external backends; null selects HTTP.
Translation Translate(std::string_view text, const TranslatorBackend& backend,
                      Transport* transport = nullptr);

}  // namespace wayplan

#endif  // WAYPLAN_NL_BRIDGE_HPP_
