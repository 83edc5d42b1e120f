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

#include "fleet/metrics/registry.hpp"

#include <json.hpp>

namespace fleet::metrics {

using nlohmann::json;

void MetricsRegistry::register_type(const std::string& type) {
  std::lock_guard lock(mu_);
  entries_.try_emplace(type);
}

Result<void> MetricsRegistry::record(const std::string& type, double duration_ms,
                                     RequestOutcome outcome) {
  if (duration_ms < 0) {
    return Error{Errc::NegativeDuration, "duration " + std::to_string(duration_ms)};
  }
  std::lock_guard lock(mu_);
  Entry& e = entries_[type];
  e.requests += 1;
  if (outcome == RequestOutcome::Success) {
    e.responses += 1;
    e.hist.add(duration_ms);
  } else {
    e.failures += 1;
  }
  return {};
}

void MetricsRegistry::begin(const std::string& type) {
  std::lock_guard lock(mu_);
  Entry& e = entries_[type];
  e.requests += 1;
  e.in_flight += 1;
}

Result<void> MetricsRegistry::complete(const std::string& type, double duration_ms,
                                       RequestOutcome outcome) {
  if (duration_ms < 0) {
    return Error{Errc::NegativeDuration, "duration " + std::to_string(duration_ms)};
  }
  std::lock_guard lock(mu_);
  Entry& e = entries_[type];
  if (e.in_flight > 0) e.in_flight -= 1;
  if (outcome == RequestOutcome::Success) {
    e.responses += 1;
    e.hist.add(duration_ms);
  } else {
    e.failures += 1;
  }
  return {};
}

RequestProfile MetricsRegistry::profile_locked(const std::string& type, const Entry& e) const {
  RequestProfile p;
  p.type = type;
  p.requests = e.requests;
  p.responses = e.responses;
  p.failures = e.failures;
  p.in_flight = e.in_flight;
  if (e.responses > 0) {
    p.mean_ms = e.hist.mean();
    p.median_ms = e.hist.quantile(0.5);
    p.p99_ms = e.hist.quantile(0.99);
  }
  return p;
}

Result<RequestProfile> MetricsRegistry::snapshot(const std::string& type) const {
  std::lock_guard lock(mu_);
  auto it = entries_.find(type);
  if (it == entries_.end()) {
    return Error{Errc::UnknownRequestType, type};
  }
  return profile_locked(type, it->second);
}

std::vector<RequestProfile> MetricsRegistry::snapshot_all() const {
  std::lock_guard lock(mu_);
  std::vector<RequestProfile> out;
  out.reserve(entries_.size());
  for (const auto& [type, e] : entries_) out.push_back(profile_locked(type, e));
  return out;
}

Result<double> MetricsRegistry::quantile(const std::string& type, double q) const {
  std::lock_guard lock(mu_);
  auto it = entries_.find(type);
  if (it == entries_.end()) return Error{Errc::UnknownRequestType, type};
  if (it->second.responses == 0) return Error{Errc::NoSamples, type};
  return it->second.hist.quantile(q);
}

std::string MetricsRegistry::to_json() const {
  json out = json::array();
  for (const auto& p : snapshot_all()) {
    json j{{"type", p.type},
           {"requests", p.requests},
           {"responses", p.responses},
           {"failures", p.failures}};
    if (p.mean_ms) j["mean"] = *p.mean_ms;
    if (p.median_ms) j["p50"] = *p.median_ms;
    if (p.p99_ms) j["p99"] = *p.p99_ms;
    out.push_back(std::move(j));
  }
  return out.dump();
}

}  // namespace fleet::metrics
