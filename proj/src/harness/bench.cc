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

#include "rsam/harness/bench.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "rsam/core/digest.h"
#include "rsam/core/error.h"
#include "rsam/harness/deployment.h"

namespace rsam::harness {
namespace {

struct Sample {
  std::uint64_t request = 0;
  std::uint64_t response_wire = 0;
  std::uint64_t response_body = 0;
  double ms = 0;
  std::string sha;
};

template <typename T>
T median(std::vector<T> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

std::string size_label(std::size_t bytes) {
  if (bytes >= 1024 * 1024 && bytes % (1024 * 1024) == 0) {
    return std::to_string(bytes / (1024 * 1024)) + "m";
  }
  if (bytes >= 1024 && bytes % 1024 == 0) return std::to_string(bytes / 1024) + "k";
  return std::to_string(bytes);
}

}  // namespace

std::string_view to_string(BenchPath path) {
  return path == BenchPath::kDirect ? "DIRECT" : "MIDDLEWARE";
}

std::size_t parse_size(std::string_view text) {
  std::size_t mult = 1;
  if (!text.empty()) {
    char last = static_cast<char>(std::tolower(static_cast<unsigned char>(text.back())));
    if (last == 'k') mult = 1024;
    if (last == 'm') mult = 1024 * 1024;
    if (mult != 1) text.remove_suffix(1);
  }
  std::size_t n = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), n);
  if (text.empty() || ec != std::errc() || end != text.data() + text.size()) {
    throw RsamError(ErrorCode::kInvalidParams, "bad size '" + std::string(text) + "'");
  }
  return n * mult;
}

BenchReport run_bench(const BenchOptions& options) {
  BenchReport report;
  report.latency = options.latency;
  report.repetitions = options.repetitions;

  DeploymentOptions dopts;
  dopts.client_timeout = std::chrono::milliseconds(60'000);
  Deployment d(options.work_dir / "bench", dopts);
  client::Consumer& consumer = d.consumer();

  std::vector<double> all_overheads;
  for (std::size_t size : options.sizes) {
    FaultScript script;
    script.routes["/bench/upload"] = RouteFault{200, options.latency, size};
    d.cloud().apply(script);
    const std::string& payload = generated_payload(size);

    std::vector<Sample> direct, middle;
    auto measure = [&](const std::string& service, CountingRelay& relay) {
      relay.reset();
      auto r = consumer.consume(service, {}, payload, client::always_reachable,
                                "application/octet-stream");
      if (!r.outcome || r.outcome->state != core::OutcomeState::kSucceeded) {
        throw RsamError(ErrorCode::kScenarioFailed,
                        "bench request over " + service + " did not succeed");
      }
      auto conns = relay.connections();
      if (conns.size() != 1) {
        throw RsamError(ErrorCode::kScenarioFailed,
                        "expected one connection for " + service + ", saw " +
                            std::to_string(conns.size()));
      }
      Sample s;
      s.request = conns[0].sent;
      s.response_wire = conns[0].received;
      s.response_body = r.outcome->payload.size();
      s.ms = std::chrono::duration<double, std::milli>(r.elapsed).count();
      s.sha = core::to_hex(core::sha256(r.outcome->payload));
      return s;
    };

    // Warm-up pair keeps first-touch costs out of the medians.
    measure("upload-direct", d.cloud().relay());
    measure("upload", d.gateway_relay());
    for (int rep = 0; rep < options.repetitions; ++rep) {
      if (rep % 2 == 0) {
        direct.push_back(measure("upload-direct", d.cloud().relay()));
        middle.push_back(measure("upload", d.gateway_relay()));
      } else {
        middle.push_back(measure("upload", d.gateway_relay()));
        direct.push_back(measure("upload-direct", d.cloud().relay()));
      }
    }

    auto row_for = [&](BenchPath path, const std::vector<Sample>& samples) {
      BenchRow row;
      row.function_name = "upload";
      row.path = path;
      row.payload_bytes = size;
      std::vector<std::uint64_t> req, body, wire;
      std::vector<double> ms;
      for (const auto& s : samples) {
        req.push_back(s.request);
        body.push_back(s.response_body);
        wire.push_back(s.response_wire);
        ms.push_back(s.ms);
      }
      row.request_size = median(req);
      row.response_size = median(body);
      row.response_wire_size = median(wire);
      row.elapsed_ms = median(ms);
      row.response_sha256 = samples.front().sha;
      return row;
    };
    BenchRow drow = row_for(BenchPath::kDirect, direct);
    BenchRow mrow = row_for(BenchPath::kMiddleware, middle);

    BenchSizeSummary sum;
    sum.payload_bytes = size;
    sum.overhead_bytes = static_cast<std::int64_t>(mrow.request_size) -
                         static_cast<std::int64_t>(drow.request_size);
    sum.response_delta = static_cast<std::int64_t>(mrow.response_size) -
                         static_cast<std::int64_t>(drow.response_size);
    const std::string expected = core::to_hex(core::sha256(payload));
    sum.bodies_identical = true;
    for (std::size_t i = 0; i < direct.size(); ++i) {
      sum.bodies_identical = sum.bodies_identical && direct[i].sha == expected &&
                             middle[i].sha == expected;
      all_overheads.push_back(static_cast<double>(middle[i].request) -
                              static_cast<double>(direct[i].request));
    }
    sum.time_ratio = drow.elapsed_ms > 0 ? mrow.elapsed_ms / drow.elapsed_ms : 0;
    report.rows.push_back(drow);
    report.rows.push_back(mrow);
    report.sizes.push_back(sum);
  }

  if (!all_overheads.empty()) {
    double mean = 0;
    for (double o : all_overheads) mean += o;
    mean /= static_cast<double>(all_overheads.size());
    double var = 0;
    for (double o : all_overheads) var += (o - mean) * (o - mean);
    report.overhead_stddev = std::sqrt(var / static_cast<double>(all_overheads.size()));
    report.overhead_bytes = static_cast<std::int64_t>(std::llround(mean));
  }
  return report;
}

std::string BenchReport::csv() const {
  std::ostringstream out;
  out << "function_name,path,payload_bytes,request_size,response_size,response_wire_size,"
         "elapsed_ms,response_sha256\n";
  for (const auto& r : rows) {
    out << r.function_name << ',' << to_string(r.path) << ',' << r.payload_bytes << ','
        << r.request_size << ',' << r.response_size << ',' << r.response_wire_size << ','
        << std::fixed << std::setprecision(3) << r.elapsed_ms << ',' << r.response_sha256
        << '\n';
  }
  return out.str();
}

std::string BenchReport::table() const {
  std::ostringstream out;
  out << std::left << std::setw(10) << "Function" << std::setw(7) << "Size" << std::setw(12)
      << "Path" << std::right << std::setw(14) << "Request (B)" << std::setw(14)
      << "Response (B)" << std::setw(12) << "Time (ms)" << '\n';
  for (const auto& r : rows) {
    out << std::left << std::setw(10) << r.function_name << std::setw(7)
        << size_label(r.payload_bytes) << std::setw(12) << to_string(r.path) << std::right
        << std::setw(14) << r.request_size << std::setw(14) << r.response_size
        << std::setw(12) << std::fixed << std::setprecision(1) << r.elapsed_ms << '\n';
  }
  out << '\n'
      << std::left << std::setw(7) << "Size" << std::right << std::setw(16)
      << "Overhead (B)" << std::setw(16) << "Resp delta (B)" << std::setw(12) << "Identical"
      << std::setw(10) << "TM/TC" << '\n';
  for (const auto& s : sizes) {
    out << std::left << std::setw(7) << size_label(s.payload_bytes) << std::right
        << std::setw(16) << s.overhead_bytes << std::setw(16) << s.response_delta
        << std::setw(12) << (s.bodies_identical ? "yes" : "NO") << std::setw(10)
        << std::fixed << std::setprecision(3) << s.time_ratio << '\n';
  }
  out << "\nrequest overhead " << overhead_bytes << " B, sigma " << std::setprecision(2)
      << overhead_stddev << " B; upstream latency " << latency.count() << " ms; "
      << repetitions << " repetitions, medians\n";
  return out.str();
}

}  // namespace rsam::harness
