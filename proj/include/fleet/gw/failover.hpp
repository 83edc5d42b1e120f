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

#include <optional>
#include <string>
#include <vector>

#include "fleet/core/result.hpp"
#include "fleet/state/store.hpp"

namespace fleet::gw {

struct Endpoint {
  std::string host;
  int port = 0;

  bool operator==(const Endpoint&) const = default;
  std::string to_string() const { return host + ":" + std::to_string(port); }
  static std::optional<Endpoint> parse(std::string_view text);
};

/// Live gateway endpoints for one cluster, discovered from the state store
/// rather than from any static client configuration.
struct EndpointSet {
  std::string cluster;
  std::vector<Endpoint> endpoints;
};

struct FailoverPolicy {
  uint32_t max_attempts = 3;
  uint64_t attempt_deadline_ms = 1000;
};

struct Request {
  std::string method = "GET";
  std::string path;
  std::string body;
};

struct Attempt {
  Endpoint endpoint;
  enum class Signal { Ok, Unavailable, Timeout, Error };
  Signal signal = Signal::Ok;
  uint64_t latency_ms = 0;
};

const char* to_string(Attempt::Signal s);

struct CallResult {
  int status = 0;
  std::string body;
  std::vector<Attempt> attempts;
  std::optional<Error> failure;  // AllEndpointsFailed after max attempts

  bool ok() const { return !failure.has_value(); }
  uint64_t total_latency_ms() const;
};

/// One request/response exchange with a single endpoint. A reply with
/// `failover` set is the active unavailability signal (HTTP: 503 plus
/// X-Failover: true); nullopt is a silent failure that consumed the
/// per-attempt deadline.
class Transport {
 public:
  struct Reply {
    int status = 0;
    bool failover = false;
    std::string body;
    uint64_t latency_ms = 0;
  };

  virtual ~Transport() = default;
  virtual std::optional<Reply> roundtrip(const Endpoint& endpoint, const Request& request,
                                         uint64_t deadline_ms) = 0;
};

/// Tries endpoints in rotation order. An active unavailable signal moves
/// to the next endpoint immediately; only silent failures consume the
/// per-attempt deadline. The attempt log records every endpoint and the
/// signal it produced.
CallResult call_with_failover(Transport& transport, const Request& request,
                              const EndpointSet& endpoints, const FailoverPolicy& policy);

/// httplib-backed transport for real gateways.
class HttpTransport : public Transport {
 public:
  std::optional<Reply> roundtrip(const Endpoint& endpoint, const Request& request,
                                 uint64_t deadline_ms) override;
};

/// Publishes and reads the EndpointSet fact (svc/<cluster>/endpoints).
class EndpointDirectory {
 public:
  EndpointDirectory(const state::StateStore& store, std::string cluster)
      : store_(store), cluster_(std::move(cluster)) {}

  EndpointSet current() const;

  static Result<void> publish(state::StateStore& store, const std::string& cluster,
                              const std::vector<Endpoint>& endpoints,
                              const std::string& owner);

 private:
  const state::StateStore& store_;
  std::string cluster_;
};

}  // namespace fleet::gw
