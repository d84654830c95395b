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

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace rsam::harness {

// Bytes seen on one relayed TCP connection.
struct ConnectionStats {
  std::uint64_t sent = 0;      // client -> target
  std::uint64_t received = 0;  // target -> client
};

// Loopback TCP relay that counts wire bytes per connection. Closing the
// listener makes the target look unreachable (connections are refused).
class CountingRelay {
 public:
  // listen_port 0 picks a free port; it is kept across set_reachable().
  CountingRelay(std::string target_host, int target_port, int listen_port = 0);
  ~CountingRelay();

  CountingRelay(const CountingRelay&) = delete;
  CountingRelay& operator=(const CountingRelay&) = delete;

  int port() const { return port_; }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }

  void set_reachable(bool reachable);
  bool reachable() const;

  // Every connection accepted since the last reset(), oldest first. Counts of
  // a live connection keep growing.
  std::vector<ConnectionStats> connections() const;
  void reset();

 private:
  struct Live;

  void open_listener();
  void close_listener();
  void accept_loop(int listen_fd);
  void serve(std::shared_ptr<Live> conn);

  std::string target_host_;
  int target_port_;
  int port_ = 0;

  mutable std::mutex mu_;
  int listen_fd_ = -1;
  std::thread acceptor_;
  std::vector<std::shared_ptr<Live>> conns_;
  std::size_t first_counted_ = 0;
  std::vector<std::thread> workers_;
  bool stopping_ = false;
};

// A port that was free a moment ago on 127.0.0.1.
int pick_free_port();

}  // namespace rsam::harness
