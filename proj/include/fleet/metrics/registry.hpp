// Copyright 2026 The fleetd Authors
//
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

#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "fleet/core/result.hpp"
#include "fleet/metrics/histogram.hpp"

namespace fleet::metrics {

enum class RequestOutcome { Success, Failure };

/// Point-in-time profile of one request type. Statistics are absent until
/// the first successful response.
struct RequestProfile {
  std::string type;
  uint64_t requests = 0;
  uint64_t responses = 0;
  uint64_t failures = 0;
  uint64_t in_flight = 0;
  std::optional<double> mean_ms;
  std::optional<double> median_ms;
  std::optional<double> p99_ms;
};

/// Per-request-type counters and latency distribution. Recording is safe
/// from concurrent callers; snapshots see a consistent cut.
class MetricsRegistry {
 public:
  /// Makes a type snapshottable before its first request.
  void register_type(const std::string& type);

  /// Counts one finished request. Requests always increment; responses and
  /// the histogram only on success, failures otherwise.
  Result<void> record(const std::string& type, double duration_ms, RequestOutcome outcome);

  /// begin/complete bracket a request so in-flight counts are visible.
  void begin(const std::string& type);
  Result<void> complete(const std::string& type, double duration_ms, RequestOutcome outcome);

  Result<RequestProfile> snapshot(const std::string& type) const;
  std::vector<RequestProfile> snapshot_all() const;

  /// Quantile estimate for q in (0, 1]; NoSamples until a success arrives.
  Result<double> quantile(const std::string& type, double q) const;

  /// JSON array for the gateway endpoint:
  /// [{type, requests, responses, failures, mean, p50, p99}, ...]
  std::string to_json() const;

 private:
  struct Entry {
    uint64_t requests = 0;
    uint64_t responses = 0;
    uint64_t failures = 0;
    uint64_t in_flight = 0;
    LatencyHistogram hist;
  };

  RequestProfile profile_locked(const std::string& type, const Entry& e) const;

  mutable std::mutex mu_;
  std::map<std::string, Entry> entries_;
};

}  // namespace fleet::metrics
