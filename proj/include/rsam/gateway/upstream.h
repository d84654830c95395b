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

#include <chrono>
#include <string>

#include "rsam/core/descriptor.h"
#include "rsam/core/wire.h"

namespace rsam::gateway {

struct UpstreamRequest {
  core::HttpMethod method = core::HttpMethod::kGet;
  std::string target;  // path plus optional query
  std::string body;
  std::string content_type;
  core::Headers headers;  // end-to-end headers only
};

struct UpstreamResponse {
  int status = 0;
  std::string body;
  std::string content_type;
};

// The cloud service the gateway fronts.
//
// send() returns any HTTP answer, whatever its status. It throws
// RsamError(kUpstreamUnreachable) when the request provably never reached the
// service (connect refused or timed out) and RsamError(kUpstreamTimeout) when
// it was sent but no answer came back, so the outcome is unknown.
class Upstream {
 public:
  virtual ~Upstream() = default;
  virtual UpstreamResponse send(const UpstreamRequest& request,
                                std::chrono::milliseconds timeout) = 0;
};

class HttpUpstream final : public Upstream {
 public:
  explicit HttpUpstream(std::string base_url);

  UpstreamResponse send(const UpstreamRequest& request,
                        std::chrono::milliseconds timeout) override;

 private:
  core::BaseUrl base_;
};

}  // namespace rsam::gateway
