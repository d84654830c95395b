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

#include "rsam/harness/relay.h"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <array>
#include <cerrno>
#include <cstring>

#include "rsam/core/error.h"

namespace rsam::harness {
namespace {

sockaddr_in loopback(int port) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(static_cast<uint16_t>(port));
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  return addr;
}

[[noreturn]] void io_error(const std::string& what) {
  throw RsamError(ErrorCode::kIo, what + ": " + std::strerror(errno));
}

int connect_to(const std::string& host, int port) {
  int fd = ::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0);
  if (fd < 0) return -1;
  sockaddr_in addr = loopback(port);
  if (host != "127.0.0.1" && host != "localhost") {
    ::inet_pton(AF_INET, host.c_str(), &addr.sin_addr);
  }
  if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
    ::close(fd);
    return -1;
  }
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  return fd;
}

bool write_all(int fd, const char* data, std::size_t len) {
  while (len > 0) {
    ssize_t n = ::send(fd, data, len, MSG_NOSIGNAL);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) return false;
    data += n;
    len -= static_cast<std::size_t>(n);
  }
  return true;
}

}  // namespace

struct CountingRelay::Live {
  int client = -1;
  int target = -1;
  std::atomic<std::uint64_t> sent{0};
  std::atomic<std::uint64_t> received{0};
};

int pick_free_port() {
  int fd = ::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0);
  if (fd < 0) io_error("socket");
  sockaddr_in addr = loopback(0);
  if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
    ::close(fd);
    io_error("bind");
  }
  socklen_t len = sizeof(addr);
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  ::close(fd);
  return ntohs(addr.sin_port);
}

CountingRelay::CountingRelay(std::string target_host, int target_port, int listen_port)
    : target_host_(std::move(target_host)), target_port_(target_port), port_(listen_port) {
  open_listener();
}

CountingRelay::~CountingRelay() {
  close_listener();
  std::vector<std::thread> workers;
  {
    std::lock_guard lock(mu_);
    stopping_ = true;
    for (auto& c : conns_) {
      ::shutdown(c->client, SHUT_RDWR);
      ::shutdown(c->target, SHUT_RDWR);
    }
    workers.swap(workers_);
  }
  for (auto& w : workers) w.join();
}

void CountingRelay::open_listener() {
  std::lock_guard lock(mu_);
  if (listen_fd_ >= 0) return;
  int fd = ::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0);
  if (fd < 0) io_error("socket");
  int one = 1;
  ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr = loopback(port_);
  if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0 ||
      ::listen(fd, 128) != 0) {
    ::close(fd);
    io_error("relay listen on " + std::to_string(port_));
  }
  socklen_t len = sizeof(addr);
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
  listen_fd_ = fd;
  acceptor_ = std::thread([this, fd] { accept_loop(fd); });
}

void CountingRelay::close_listener() {
  std::thread acceptor;
  {
    std::lock_guard lock(mu_);
    if (listen_fd_ < 0) return;
    ::shutdown(listen_fd_, SHUT_RDWR);
    acceptor.swap(acceptor_);
  }
  acceptor.join();
  std::lock_guard lock(mu_);
  ::close(listen_fd_);
  listen_fd_ = -1;
}

void CountingRelay::set_reachable(bool reachable) {
  if (reachable) {
    open_listener();
  } else {
    close_listener();
  }
}

bool CountingRelay::reachable() const {
  std::lock_guard lock(mu_);
  return listen_fd_ >= 0;
}

void CountingRelay::accept_loop(int listen_fd) {
  for (;;) {
    int client = ::accept4(listen_fd, nullptr, nullptr, SOCK_CLOEXEC);
    if (client < 0) {
      if (errno == EINTR || errno == ECONNABORTED) continue;
      return;  // listener shut down
    }
    int one = 1;
    ::setsockopt(client, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
    int target = connect_to(target_host_, target_port_);
    if (target < 0) {
      ::close(client);
      continue;
    }
    auto conn = std::make_shared<Live>();
    conn->client = client;
    conn->target = target;
    std::lock_guard lock(mu_);
    if (stopping_) {
      ::close(client);
      ::close(target);
      return;
    }
    conns_.push_back(conn);
    workers_.emplace_back([this, conn] { serve(conn); });
  }
}

void CountingRelay::serve(std::shared_ptr<Live> conn) {
  // One poll loop pumping both directions.
  std::array<char, 64 * 1024> buf;
  bool client_open = true;
  bool target_open = true;
  while (client_open || target_open) {
    pollfd fds[2] = {{conn->client, static_cast<short>(client_open ? POLLIN : 0), 0},
                     {conn->target, static_cast<short>(target_open ? POLLIN : 0), 0}};
    if (::poll(fds, 2, -1) < 0) {
      if (errno == EINTR) continue;
      break;
    }
    bool failed = false;
    for (int i = 0; i < 2; ++i) {
      if (!(fds[i].revents & (POLLIN | POLLHUP | POLLERR))) continue;
      int from = i == 0 ? conn->client : conn->target;
      int to = i == 0 ? conn->target : conn->client;
      ssize_t n = ::recv(from, buf.data(), buf.size(), 0);
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) {
        (i == 0 ? client_open : target_open) = false;
        ::shutdown(to, SHUT_WR);
        if (n < 0) failed = true;
        continue;
      }
      if (!write_all(to, buf.data(), static_cast<std::size_t>(n))) {
        failed = true;
        break;
      }
      (i == 0 ? conn->sent : conn->received) += static_cast<std::uint64_t>(n);
    }
    if (failed) break;
    // The target finished its answer: nothing more will flow.
    if (!target_open) break;
  }
  ::shutdown(conn->client, SHUT_RDWR);
  ::shutdown(conn->target, SHUT_RDWR);
  std::lock_guard lock(mu_);
  ::close(conn->client);
  ::close(conn->target);
  conn->client = conn->target = -1;
}

std::vector<ConnectionStats> CountingRelay::connections() const {
  std::lock_guard lock(mu_);
  std::vector<ConnectionStats> out;
  for (std::size_t i = first_counted_; i < conns_.size(); ++i) {
    out.push_back({conns_[i]->sent.load(), conns_[i]->received.load()});
  }
  return out;
}

void CountingRelay::reset() {
  std::lock_guard lock(mu_);
  first_counted_ = conns_.size();
}

}  // namespace rsam::harness
