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

#include "fleet/gw/failover.hpp"

#include <chrono>

#include <httplib.h>

#include "fleet/core/strings.hpp"

namespace fleet::gw {

const char* to_string(Attempt::Signal s) {
  switch (s) {
    case Attempt::Signal::Ok: return "ok";
    case Attempt::Signal::Unavailable: return "unavailable";
    case Attempt::Signal::Timeout: return "timeout";
    case Attempt::Signal::Error: return "error";
  }
  return "?";
}

std::optional<Endpoint> Endpoint::parse(std::string_view text) {
  auto colon = text.rfind(':');
  if (colon == std::string_view::npos) return std::nullopt;
  auto port = parse_u64(text.substr(colon + 1));
  if (!port.ok() || port.value() == 0 || port.value() > 65535) return std::nullopt;
  return Endpoint{std::string(text.substr(0, colon)), static_cast<int>(port.value())};
}

uint64_t CallResult::total_latency_ms() const {
  uint64_t sum = 0;
  for (const auto& a : attempts) sum += a.latency_ms;
  return sum;
}

CallResult call_with_failover(Transport& transport, const Request& request,
                              const EndpointSet& endpoints, const FailoverPolicy& policy) {
  CallResult result;
  if (endpoints.endpoints.empty()) {
    result.failure = Error{Errc::AllEndpointsFailed, "endpoint set is empty"};
    return result;
  }

  for (uint32_t attempt = 0; attempt < policy.max_attempts; ++attempt) {
    const Endpoint& endpoint = endpoints.endpoints[attempt % endpoints.endpoints.size()];
    auto reply = transport.roundtrip(endpoint, request, policy.attempt_deadline_ms);
    Attempt record;
    record.endpoint = endpoint;
    if (!reply.has_value()) {
      record.signal = Attempt::Signal::Timeout;
      record.latency_ms = policy.attempt_deadline_ms;
      result.attempts.push_back(record);
      continue;
    }
    record.latency_ms = reply->latency_ms;
    if (reply->failover) {
      // Active unavailability signal: move on immediately, no timeout wait.
      record.signal = Attempt::Signal::Unavailable;
      result.attempts.push_back(record);
      continue;
    }
    record.signal = Attempt::Signal::Ok;
    result.attempts.push_back(record);
    result.status = reply->status;
    result.body = reply->body;
    return result;
  }

  std::string log;
  for (const auto& a : result.attempts) {
    if (!log.empty()) log += ", ";
    log += a.endpoint.to_string() + "=" + to_string(a.signal);
  }
  result.failure = Error{Errc::AllEndpointsFailed, log};
  return result;
}

std::optional<Transport::Reply> HttpTransport::roundtrip(const Endpoint& endpoint,
                                                         const Request& request,
                                                         uint64_t deadline_ms) {
  const auto started = std::chrono::steady_clock::now();
  httplib::Client client(endpoint.host, endpoint.port);
  client.set_connection_timeout(0, static_cast<time_t>(deadline_ms) * 1000);
  client.set_read_timeout(0, static_cast<time_t>(deadline_ms) * 1000);

  httplib::Result res;
  if (request.method == "GET") {
    res = client.Get(request.path);
  } else if (request.method == "PUT") {
    res = client.Put(request.path, request.body, "application/json");
  } else {
    res = client.Post(request.path, request.body, "application/json");
  }
  const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - started)
                           .count();
  if (!res) return std::nullopt;

  Reply reply;
  reply.status = res->status;
  reply.body = res->body;
  reply.latency_ms = static_cast<uint64_t>(elapsed);
  reply.failover = res->status == 503 && res->get_header_value("X-Failover") == "true";
  return reply;
}

EndpointSet EndpointDirectory::current() const {
  EndpointSet set;
  set.cluster = cluster_;
  auto value = store_.value_of(state::StateKey{"svc", cluster_, "endpoints"},
                               state::RecordKind::Fact);
  if (!value.has_value()) return set;
  for (const auto& part : split(value->to_string(), ';')) {
    if (auto endpoint = Endpoint::parse(part)) set.endpoints.push_back(*endpoint);
  }
  return set;
}

Result<void> EndpointDirectory::publish(state::StateStore& store, const std::string& cluster,
                                        const std::vector<Endpoint>& endpoints,
                                        const std::string& owner) {
  std::vector<std::string> parts;
  parts.reserve(endpoints.size());
  for (const auto& e : endpoints) parts.push_back(e.to_string());
  const state::StateKey key{"svc", cluster, "endpoints"};
  auto put = store.put_fact(owner, key, Value(join(parts, ";")),
                            store.latest_version(key, owner) + 1);
  if (!put.ok()) return put.error();
  return {};
}

}  // namespace fleet::gw
