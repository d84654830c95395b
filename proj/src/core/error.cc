// Copyright 2026 The RSAM Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rsam/core/error.h"

namespace rsam {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyDeviceId: return "EmptyDeviceId";
    case ErrorCode::kInvalidTrial: return "InvalidTrial";
    case ErrorCode::kMalformedId: return "MalformedId";
    case ErrorCode::kClockSkew: return "ClockSkew";
    case ErrorCode::kIllegalTransition: return "IllegalTransition";
    case ErrorCode::kInvalidDescriptor: return "InvalidDescriptor";
    case ErrorCode::kInvalidParams: return "InvalidParams";
    case ErrorCode::kFilterRejected: return "FilterRejected";
    case ErrorCode::kPayloadTooLarge: return "PayloadTooLarge";
    case ErrorCode::kNotFound: return "NotFound";
    case ErrorCode::kNotRetryable: return "NotRetryable";
    case ErrorCode::kStoreCorrupt: return "StoreCorrupt";
    case ErrorCode::kUpstreamUnreachable: return "UpstreamUnreachable";
    case ErrorCode::kUpstreamTimeout: return "UpstreamTimeout";
    case ErrorCode::kUnknownService: return "UnknownService";
    case ErrorCode::kMissingStateHeader: return "MissingStateHeader";
    case ErrorCode::kScenarioFailed: return "ScenarioFailed";
    case ErrorCode::kInjectionUnsupportedPoint: return "InjectionUnsupportedPoint";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

}  // namespace rsam
