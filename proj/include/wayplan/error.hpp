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

#ifndef WAYPLAN_ERROR_HPP_
#define WAYPLAN_ERROR_HPP_

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace wayplan {

enum class ErrorCode {
  kInvalidArgument,
  kMalformedJson,
  kSchemaViolation,
  kInvariantViolation,
  kMissingLegs,
  kUnparsableSegment,
  kEndpointUnreachable,
  kInvalidOutputAfterRetries,
  kFileUnreadable,
  kMappingIncomplete,
  kSpanTooLong,
  kMTooSmall,
  kGridMismatch,
  kCapExceeded,
  kGroundTruthInfeasible,
  kUnknownField,
  kInvalidConfig,
  kUnknownSession,
};

std::string_view ErrorCodeName(ErrorCode code);

// Half-open character range into the text that failed to parse.
struct TextSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
  bool operator==(const TextSpan&) const = default;
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string path = {},
        std::optional<TextSpan> span = std::nullopt);

  ErrorCode code() const { return code_; }
  // JSON pointer or dotted field path, empty when not applicable.
  const std::string& path() const { return path_; }
  const std::optional<TextSpan>& span() const { return span_; }

 private:
  ErrorCode code_;
  std::string path_;
  std::optional<TextSpan> span_;
};

}  // namespace wayplan

#endif  // WAYPLAN_ERROR_HPP_
