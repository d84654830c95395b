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
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace rsam::harness {

enum class BenchPath { kDirect, kMiddleware };
std::string_view to_string(BenchPath path);

// Median over the repetitions of one (size, path) cell.
struct BenchRow {
  std::string function_name;
  BenchPath path = BenchPath::kDirect;
  std::size_t payload_bytes = 0;
  std::uint64_t request_size = 0;   // on the wire, headers + body
  std::uint64_t response_size = 0;  // response body bytes
  std::uint64_t response_wire_size = 0;
  double elapsed_ms = 0;
  std::string response_sha256;
};

struct BenchSizeSummary {
  std::size_t payload_bytes = 0;
  std::int64_t overhead_bytes = 0;  // middleware request - direct request
  std::int64_t response_delta = 0;  // middleware body - direct body
  bool bodies_identical = false;    // every repetition hash-equal
  double time_ratio = 0;            // median TM / median TC
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::vector<BenchSizeSummary> sizes;
  double overhead_stddev = 0;  // over every repetition of every size
  std::int64_t overhead_bytes = 0;
  std::chrono::milliseconds latency{0};
  int repetitions = 0;

  std::string csv() const;
  std::string table() const;
};

struct BenchOptions {
  std::vector<std::size_t> sizes = {1024, 64 * 1024, 1024 * 1024, 4 * 1024 * 1024};
  std::chrono::milliseconds latency{200};
  int repetitions = 5;
  std::filesystem::path work_dir;
};

// Sends the same payload class over both routes, alternating, and measures
// client wall time plus the bytes each relay saw.
BenchReport run_bench(const BenchOptions& options);

// "1k", "64k", "1m", "4m", "512" -> bytes. Throws RsamError(kInvalidParams).
std::size_t parse_size(std::string_view text);

}  // namespace rsam::harness
