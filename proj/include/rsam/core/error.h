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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rsam {

enum class ErrorCode {
  kEmptyDeviceId,
  kInvalidTrial,
  kMalformedId,
  kClockSkew,
  kIllegalTransition,
  kInvalidDescriptor,
  kInvalidParams,
  kFilterRejected,
  kPayloadTooLarge,
  kNotFound,
  kNotRetryable,
  kStoreCorrupt,
  kUpstreamUnreachable,
  kUpstreamTimeout,
  kUnknownService,
  kMissingStateHeader,
  kScenarioFailed,
  kInjectionUnsupportedPoint,
  kInvalidConfig,
  kIo,
};

std::string_view to_string(ErrorCode code);

// Every failure surfaced by the rsam libraries carries one of the codes above
// so callers (and the HTTP layer) can map it without string matching.
class RsamError : public std::runtime_error {
 public:
  RsamError(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rsam
