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

#include "rsam/gateway/upstream.h"

#include <httplib.h>

#include "rsam/core/error.h"

namespace rsam::gateway {

HttpUpstream::HttpUpstream(std::string base_url)
    : base_(core::split_base_url(base_url)) {}

UpstreamResponse HttpUpstream::send(const UpstreamRequest& request,
                                    std::chrono::milliseconds timeout) {
  httplib::Client client(base_.origin);
  client.set_keep_alive(false);
  client.set_tcp_nodelay(true);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);

  httplib::Request req;
  req.method = std::string(core::to_string(request.method));
  req.path = base_.prefix + request.target;
  for (const auto& [k, v] : request.headers) req.set_header(k, v);
  if (!request.content_type.empty()) req.set_header("Content-Type", request.content_type);
  req.body = request.body;

  auto result = client.send(req);
  if (!result) {
    auto err = result.error();
    std::string what = "upstream " + base_.origin + ": " + httplib::to_string(err);
    switch (err) {
      case httplib::Error::Connection:
      case httplib::Error::ConnectionTimeout:
      case httplib::Error::BindIPAddress:
        throw RsamError(ErrorCode::kUpstreamUnreachable, what);
      default:
        throw RsamError(ErrorCode::kUpstreamTimeout, what);
    }
  }
  UpstreamResponse out;
  out.status = result->status;
  out.body = std::move(result->body);
  out.content_type = result->get_header_value("Content-Type");
  return out;
}

}  // namespace rsam::gateway
