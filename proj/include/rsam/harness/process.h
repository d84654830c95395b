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

#include <sys/types.h>

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace rsam::harness {

// A supervised child process. The destructor kills it if still running.
class ChildProcess {
 public:
  // Throws RsamError(kIo) when the program cannot be started.
  ChildProcess(const std::filesystem::path& program, const std::vector<std::string>& args,
               const std::filesystem::path& log_file);
  ~ChildProcess();

  ChildProcess(const ChildProcess&) = delete;
  ChildProcess& operator=(const ChildProcess&) = delete;

  pid_t pid() const { return pid_; }
  bool running();
  // Exit code (128 + signal for a signal death) once the child is gone.
  std::optional<int> wait_exit(std::chrono::milliseconds limit);
  // SIGTERM, then SIGKILL after a grace period; returns the exit code.
  int terminate(std::chrono::milliseconds grace = std::chrono::milliseconds(3000));

 private:
  bool reap(bool block);

  pid_t pid_ = -1;
  std::optional<int> exit_code_;
};

// Directory holding the running executable.
std::filesystem::path self_dir();

}  // namespace rsam::harness
