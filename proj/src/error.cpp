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

#include "wayplan/error.hpp"

namespace wayplan {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kMalformedJson: return "MalformedJson";
    case ErrorCode::kSchemaViolation: return "SchemaViolation";
    case ErrorCode::kInvariantViolation: return "InvariantViolation";
    case ErrorCode::kMissingLegs: return "MissingLegs";
    case ErrorCode::kUnparsableSegment: return "UnparsableSegment";
    case ErrorCode::kEndpointUnreachable: return "EndpointUnreachable";
    case ErrorCode::kInvalidOutputAfterRetries: return "InvalidOutputAfterRetries";
    case ErrorCode::kFileUnreadable: return "FileUnreadable";
    case ErrorCode::kMappingIncomplete: return "MappingIncomplete";
    case ErrorCode::kSpanTooLong: return "SpanTooLong";
    case ErrorCode::kMTooSmall: return "MTooSmall";
    case ErrorCode::kGridMismatch: return "GridMismatch";
    case ErrorCode::kCapExceeded: return "CapExceeded";
    case ErrorCode::kGroundTruthInfeasible: return "GroundTruthInfeasible";
    case ErrorCode::kUnknownField: return "UnknownField";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kUnknownSession: return "UnknownSession";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message, std::string path,
             std::optional<TextSpan> span)
    : std::runtime_error(message),
      code_(code),
      path_(std::move(path)),
      span_(span) {}

}  // namespace wayplan
