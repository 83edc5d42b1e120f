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

#include <gtest/gtest.h>

#include <httplib.h>

#include "fleet/gw/failover.hpp"
#include "fleet/gw/router.hpp"
#include "fleet/gw/server.hpp"
#include "fleet/metrics/registry.hpp"
#include "fleet/sim/simulation.hpp"

using namespace fleet;
using namespace fleet::gw;
using nlohmann::json;

namespace {

/// Scripted transport: each endpoint either answers, actively signals
/// unavailability (one round trip), or stays silent (full deadline).
class ScriptedTransport : public Transport {
 public:
  enum class Behavior { Answer, Unavailable, Silent };
  std::map<std::string, Behavior> behavior;
  uint64_t rtt_ms = 2;

  std::optional<Reply> roundtrip(const Endpoint& endpoint, const Request&,
                                 uint64_t) override {
    switch (behavior[endpoint.to_string()]) {
      case Behavior::Answer:
        return Reply{200, false, "ok from " + endpoint.to_string(), rtt_ms};
      case Behavior::Unavailable:
        return Reply{503, true, "", rtt_ms};
      case Behavior::Silent:
        return std::nullopt;
    }
    return std::nullopt;
  }
};

EndpointSet three_endpoints() {
  return EndpointSet{"cluster", {{"a", 1}, {"b", 2}, {"c", 3}}};
}

std::unique_ptr<sim::Simulation> gateway_sim() {
  auto s = sim::Scenario::parse(
      "seed 3\n"
      "switch chassis=0 ports=16\n"
      "node id=n1 chassis=0 port=1 phase=ServicesReady image=base\n"
      "node id=n2 chassis=0 port=2 phase=PoweredOff\n"
      "image id=base layers=rootfs:500\n"
      "image id=next layers=rootfs:600\n"
      "orchestrator interval=5 max-parallel=4\n");
  EXPECT_TRUE(s.ok());
  auto sim = sim::Simulation::create(std::move(s).take());
  EXPECT_TRUE(sim.ok()) << (sim.ok() ? "" : sim.error().to_string());
  return std::move(sim).take();
}

}  // namespace

TEST(Failover, ActiveSignalSkipsTimeout) {
  ScriptedTransport transport;
  transport.behavior["a:1"] = ScriptedTransport::Behavior::Unavailable;
  transport.behavior["b:2"] = ScriptedTransport::Behavior::Answer;
  FailoverPolicy policy{3, 1000};
  auto result = call_with_failover(transport, {"GET", "/x", ""}, three_endpoints(), policy);
  ASSERT_TRUE(result.ok());
  ASSERT_EQ(result.attempts.size(), 2u);
  EXPECT_EQ(result.attempts[0].signal, Attempt::Signal::Unavailable);
  EXPECT_EQ(result.attempts[1].signal, Attempt::Signal::Ok);
  // Zero timeout waits: total latency is two round trips, nowhere near the
  // per-attempt deadline.
  EXPECT_EQ(result.total_latency_ms(), 2 * transport.rtt_ms);
}

TEST(Failover, FirstEndpointSucceeds) {
  ScriptedTransport transport;
  transport.behavior["a:1"] = ScriptedTransport::Behavior::Answer;
  auto result =
      call_with_failover(transport, {"GET", "/x", ""}, three_endpoints(), {3, 1000});
  ASSERT_TRUE(result.ok());
  EXPECT_EQ(result.attempts.size(), 1u);
  EXPECT_EQ(result.body, "ok from a:1");
}

TEST(Failover, AllUnavailableFailsWithFullLog) {
  ScriptedTransport transport;
  for (const auto& e : {"a:1", "b:2", "c:3"}) {
    transport.behavior[e] = ScriptedTransport::Behavior::Unavailable;
  }
  auto result =
      call_with_failover(transport, {"GET", "/x", ""}, three_endpoints(), {3, 1000});
  ASSERT_FALSE(result.ok());
  EXPECT_EQ(result.failure->code, Errc::AllEndpointsFailed);
  ASSERT_EQ(result.attempts.size(), 3u);
  for (const auto& attempt : result.attempts) {
    EXPECT_EQ(attempt.signal, Attempt::Signal::Unavailable);
  }
}

TEST(Failover, SilentFailureConsumesDeadline) {
  ScriptedTransport transport;
  transport.behavior["a:1"] = ScriptedTransport::Behavior::Silent;
  transport.behavior["b:2"] = ScriptedTransport::Behavior::Answer;
  auto result =
      call_with_failover(transport, {"GET", "/x", ""}, three_endpoints(), {3, 500});
  ASSERT_TRUE(result.ok());
  ASSERT_EQ(result.attempts.size(), 2u);
  EXPECT_EQ(result.attempts[0].signal, Attempt::Signal::Timeout);
  EXPECT_EQ(result.attempts[0].latency_ms, 500u);
}

TEST(EndpointDirectoryTest, DiscoveryFromStoreNotClientConfig) {
  state::StateStore store;
  ASSERT_TRUE(
      store.transfer_ownership(state::KeyRange::ns("svc"), std::nullopt, "cluster-agent", 1)
          .ok());
  ASSERT_TRUE(EndpointDirectory::publish(store, "cluster",
                                         {{"127.0.0.1", 7001}, {"127.0.0.1", 7002}},
                                         "cluster-agent")
                  .ok());
  EndpointDirectory directory(store, "cluster");
  auto set = directory.current();
  ASSERT_EQ(set.endpoints.size(), 2u);
  EXPECT_EQ(set.endpoints[0].port, 7001);

  // A replica appears: clients pick it up on the next refresh, no client
  // configuration changes anywhere.
  ASSERT_TRUE(EndpointDirectory::publish(
                  store, "cluster",
                  {{"127.0.0.1", 7001}, {"127.0.0.1", 7002}, {"127.0.0.1", 7003}},
                  "cluster-agent")
                  .ok());
  EXPECT_EQ(directory.current().endpoints.size(), 3u);
}

TEST(Router, RoutesAndValidation) {
  auto sim = gateway_sim();
  metrics::MetricsRegistry registry;
  CommandRouter router({&sim->store(), sim->orchestrator(), sim.get(), &registry, nullptr});

  // "rollout --image next --max-unavailable 3" reaches the orchestrator.
  auto rollout = router.apply({"rollout", json{{"image", "next"}, {"max_unavailable", 3}}});
  ASSERT_TRUE(rollout.ok()) << rollout.error().to_string();
  EXPECT_TRUE(rollout.value().contains("task"));

  // "get facts node/n1/power" routes to the store (absent here).
  auto get = router.apply({"get", json{{"key", "node/n1/phase"}}});
  ASSERT_TRUE(get.ok());
  EXPECT_EQ(get.value()["value"], "ServicesReady");

  // Validation fires before the orchestrator is reached.
  auto invalid = router.apply({"rollout", json{{"image", "next"}, {"max_unavailable", 0}}});
  ASSERT_FALSE(invalid.ok());
  EXPECT_EQ(invalid.code(), Errc::ValidationError);

  auto unknown = router.apply({"warp", json::object()});
  ASSERT_FALSE(unknown.ok());
  EXPECT_EQ(unknown.code(), Errc::ValidationError);

  // Every handled request landed in metrics with its outcome.
  auto rollout_profile = registry.snapshot("rollout").value();
  EXPECT_EQ(rollout_profile.requests, 2u);
  EXPECT_EQ(rollout_profile.responses, 1u);
  EXPECT_EQ(rollout_profile.failures, 1u);
  EXPECT_EQ(registry.snapshot("get").value().requests, 1u);
}

TEST(Router, MutationsRequireLease) {
  auto sim = gateway_sim();
  metrics::MetricsRegistry registry;
  CommandRouter router({&sim->store(), sim->orchestrator(), sim.get(), &registry, nullptr});
  // A standby stole the lease: mutating commands are refused.
  ASSERT_TRUE(sim->store()
                  .transfer_ownership(
                      state::KeyRange::single(state::StateKey{"orch", "cluster", "lease"}),
                      "orchestrator", "standby", 2)
                  .ok());
  auto rollout = router.apply({"rollout", json{{"image", "next"}, {"max_unavailable", 1}}});
  ASSERT_FALSE(rollout.ok());
  EXPECT_EQ(rollout.code(), Errc::Unauthorized);
  auto remediate = router.apply({"remediate", json{{"kind", "revoke_access"}, {"arg", "u"}}});
  EXPECT_EQ(remediate.code(), Errc::Unauthorized);
}

TEST(HttpGateway, EndToEndRoutes) {
  auto sim = gateway_sim();
  metrics::MetricsRegistry registry;
  CommandRouter router({&sim->store(), sim->orchestrator(), sim.get(), &registry, nullptr});
  GatewayServer server(router, sim->store(), {});
  ASSERT_TRUE(server.start().ok());

  httplib::Client client("127.0.0.1", server.port());

  // GET /v1/facts/{ns}/{entity}/{prop}
  auto fact = client.Get("/v1/facts/node/n1/phase");
  ASSERT_TRUE(fact);
  EXPECT_EQ(fact->status, 200);
  EXPECT_EQ(json::parse(fact->body)["value"], "ServicesReady");

  // Strong read of a strong key works over the wire.
  auto strong = client.Get("/v1/facts/node/n1/phase?mode=strong");
  ASSERT_TRUE(strong);
  EXPECT_EQ(strong->status, 200);
  // Strong read of an eventual key is a consistency mismatch.
  auto mismatch = client.Get("/v1/facts/node/n1/image?mode=strong");
  ASSERT_TRUE(mismatch);
  EXPECT_EQ(mismatch->status, 409);

  // PUT /v1/desires then GET /v1/diff/{entity}.
  auto put = client.Put("/v1/desires",
                        json{{"key", "node/n2/phase"}, {"value", "ServicesReady"}}.dump(),
                        "application/json");
  ASSERT_TRUE(put);
  EXPECT_EQ(put->status, 200);
  auto diff = client.Get("/v1/diff/n2");
  ASSERT_TRUE(diff);
  auto diff_json = json::parse(diff->body);
  ASSERT_EQ(diff_json.size(), 1u);
  EXPECT_EQ(diff_json[0]["desire"], "ServicesReady");

  // 404 for unknown facts, 400 for malformed bodies.
  EXPECT_EQ(client.Get("/v1/facts/node/ghost/phase")->status, 404);
  EXPECT_EQ(client.Post("/v1/orchestrate/rollout", "{}", "application/json")->status, 400);

  // GET /v1/metrics reports the calls made above.
  auto metrics_reply = client.Get("/v1/metrics");
  ASSERT_TRUE(metrics_reply);
  auto metrics_json = json::parse(metrics_reply->body);
  bool saw_get = false;
  for (const auto& entry : metrics_json) {
    if (entry["type"] == "get") saw_get = true;
  }
  EXPECT_TRUE(saw_get);

  server.stop();
}

TEST(HttpGateway, LameDuckSignalsFailoverAndClientMovesOn) {
  auto sim = gateway_sim();
  metrics::MetricsRegistry registry;
  CommandRouter router({&sim->store(), sim->orchestrator(), sim.get(), &registry, nullptr});

  GatewayServer lame(router, sim->store(), {});
  GatewayServer healthy(router, sim->store(), {});
  ASSERT_TRUE(lame.start().ok());
  ASSERT_TRUE(healthy.start().ok());
  lame.set_lame_duck(true);

  // Both replicas were published into the store; the client discovers them
  // from there.
  EndpointDirectory directory(sim->store(), "cluster");
  auto endpoints = directory.current();
  ASSERT_EQ(endpoints.endpoints.size(), 2u);
  EXPECT_EQ(endpoints.endpoints[0].port, lame.port());

  HttpTransport transport;
  auto result = call_with_failover(transport, {"GET", "/v1/facts/node/n1/phase", ""},
                                   endpoints, {4, 2000});
  ASSERT_TRUE(result.ok());
  ASSERT_EQ(result.attempts.size(), 2u);
  EXPECT_EQ(result.attempts[0].signal, Attempt::Signal::Unavailable);
  EXPECT_EQ(result.attempts[1].signal, Attempt::Signal::Ok);
  // The unavailable attempt returned in round-trip time, far below the
  // 2-second deadline.
  EXPECT_LT(result.attempts[0].latency_ms, 500u);

  lame.stop();
  healthy.stop();
}

TEST(HttpGateway, SequenceFlowsRemediateAttestRoutes) {
  auto sim = gateway_sim();
  metrics::MetricsRegistry registry;
  CommandRouter router({&sim->store(), sim->orchestrator(), sim.get(), &registry, nullptr});
  GatewayServer server(router, sim->store(), {});
  ASSERT_TRUE(server.start().ok());
  httplib::Client client("127.0.0.1", server.port());

  auto sequence = client.Post(
      "/v1/orchestrate/sequence",
      json{{"dag", "vertex db\nvertex web\nedge db web\n"}, {"direction", "startup"}}.dump(),
      "application/json");
  ASSERT_TRUE(sequence);
  EXPECT_EQ(sequence->status, 200);
  auto seq_json = json::parse(sequence->body);
  EXPECT_TRUE(seq_json["success"].get<bool>());
  ASSERT_EQ(seq_json["steps"].size(), 2u);
  EXPECT_EQ(seq_json["steps"][0]["vertex"], "db");

  auto flows = client.Post(
      "/v1/flows",
      json{{"definition",
            "flow name=reboot-on-fault trigger=phase==Faulted actions=power_cycle\n"}}
          .dump(),
      "application/json");
  ASSERT_TRUE(flows);
  EXPECT_EQ(flows->status, 200);

  auto remediate = client.Post(
      "/v1/remediate", json{{"kind", "revoke_access"}, {"arg", "mallory"}}.dump(),
      "application/json");
  ASSERT_TRUE(remediate);
  EXPECT_EQ(remediate->status, 200);

  auto bad_remediate = client.Post("/v1/remediate", json{{"kind", "dance"}}.dump(),
                                   "application/json");
  EXPECT_EQ(bad_remediate->status, 400);

  auto fault = client.Post("/v1/sim/fault",
                           json{{"kind", "crash"}, {"target", "n2"}}.dump(),
                           "application/json");
  ASSERT_TRUE(fault);
  EXPECT_EQ(fault->status, 200);

  auto attest = client.Post("/v1/attest", json{{"node", "n1"}}.dump(), "application/json");
  ASSERT_TRUE(attest);
  EXPECT_EQ(attest->status, 200);
  EXPECT_EQ(json::parse(attest->body)["verdict"], "pass");

  auto run = client.Post(
      "/v1/sim/run",
      json{{"scenario", "seed 4\nswitch chassis=0\nnode id=a chassis=0 port=1\n"},
           {"until", 50}}
          .dump(),
      "application/json");
  ASSERT_TRUE(run);
  EXPECT_EQ(run->status, 200);
  EXPECT_EQ(json::parse(run->body)["nodes"], 1);

  server.stop();
}
