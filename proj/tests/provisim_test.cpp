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

#include "fleet/sim/simulation.hpp"

using namespace fleet;
using namespace fleet::sim;
using model::NodePhase;
using state::RecordKind;
using state::StateKey;

namespace {

Scenario small_scenario() {
  auto s = Scenario::parse(
      "seed 7\n"
      "switch chassis=2 ports=16\n"
      "node id=n1 chassis=2 port=7 nic=02:00:00:00:00:01 memory=1000 phase=PoweredOn\n"
      "node id=n2 chassis=2 port=8 memory=1000 phase=PoweredOn\n"
      "image id=base kind=minimal_os layers=rootfs:100,tools:50\n");
  EXPECT_TRUE(s.ok()) << (s.ok() ? "" : s.error().to_string());
  return s.ok() ? std::move(s).take() : Scenario{};
}

std::unique_ptr<Simulation> make_sim(Scenario s) {
  auto sim = Simulation::create(std::move(s));
  EXPECT_TRUE(sim.ok()) << (sim.ok() ? "" : sim.error().to_string());
  return sim.ok() ? std::move(sim).take() : nullptr;
}

}  // namespace

TEST(Scenario, ParseErrors) {
  EXPECT_FALSE(Scenario::parse("bogus directive=1").ok());
  EXPECT_FALSE(Scenario::parse("node id=n1 chassis=0").ok());        // missing port
  EXPECT_FALSE(Scenario::parse("fault kind=dance node=n1 at=0").ok());
  EXPECT_FALSE(Scenario::parse("image id=x layers=bad").ok());
  EXPECT_TRUE(Scenario::parse("seed 3\nswitch chassis=0\n").ok());
}

TEST(Simulation, DuplicateAttachmentRejectedAtLoad) {
  auto s = Scenario::parse(
      "switch chassis=0\n"
      "node id=a chassis=0 port=1\n"
      "node id=b chassis=0 port=1\n");
  ASSERT_TRUE(s.ok());
  auto sim = Simulation::create(std::move(s).take());
  ASSERT_FALSE(sim.ok());
  EXPECT_EQ(sim.code(), Errc::DuplicateAttachment);
}

TEST(Simulation, UnknownSwitchRejectedAtLoad) {
  auto s = Scenario::parse("node id=a chassis=5 port=1\n");
  ASSERT_TRUE(s.ok());
  EXPECT_EQ(Simulation::create(std::move(s).take()).code(), Errc::UnknownSwitch);
}

TEST(Discovery, GroundTruthLocation) {
  auto sim = make_sim(small_scenario());
  auto loc = sim->discover_topology("n1");
  ASSERT_TRUE(loc.ok());
  EXPECT_EQ(loc.value().chassis, 2u);
  EXPECT_EQ(loc.value().port, 7u);
  // The location fact landed; no nic registration anywhere.
  EXPECT_EQ(sim->store()
                .value_of(StateKey{"node", "n1", "location"}, RecordKind::Fact)
                ->to_string(),
            "c2-p7");
}

TEST(Discovery, LldpOffTimesOut) {
  auto sim = make_sim(small_scenario());
  FaultSpec fault;
  fault.kind = FaultSpec::Kind::LldpOff;
  fault.target = "2";
  fault.at = 0;
  ASSERT_TRUE(sim->inject_fault(fault).ok());
  sim->run_for(1);
  auto loc = sim->discover_topology("n1");
  ASSERT_FALSE(loc.ok());
  EXPECT_EQ(loc.code(), Errc::DiscoveryTimeout);
}

TEST(Discovery, UnknownNode) {
  auto sim = make_sim(small_scenario());
  EXPECT_EQ(sim->discover_topology("n999").code(), Errc::UnknownNode);
}

TEST(AssignAddress, LocationModeDelegatesToIdentity) {
  auto sim = make_sim(small_scenario());
  auto addr = sim->assign_address("n1", AddressMode::Location);
  ASSERT_TRUE(addr.ok());
  const auto expected =
      model::derive_identity({2, 7}, Ipv6Prefix::parse("fd00::/64").value());
  EXPECT_EQ(addr.value(), expected.address);
}

TEST(AssignAddress, HardwareModeEmbedsNic) {
  auto sim = make_sim(small_scenario());
  auto addr = sim->assign_address("n1", AddressMode::Hardware);
  ASSERT_TRUE(addr.ok());
  EXPECT_EQ(addr.value().to_string(), "fd00::200:0:0:1");
}

TEST(AssignAddress, TimeoutWithoutRouter) {
  auto s = small_scenario();
  s.router_enabled = false;
  auto sim = make_sim(std::move(s));
  auto addr = sim->assign_address("n1", AddressMode::Location);
  ASSERT_FALSE(addr.ok());
  EXPECT_EQ(addr.code(), Errc::AddressTimeout);
}

TEST(Boot, FullModeTransfersEveryLayerByte) {
  auto sim = make_sim(small_scenario());
  const ImageManifest* base = sim->images().find("base");
  ASSERT_NE(base, nullptr);
  auto trace = sim->boot_node("n1", *base, {TransferSpec::Mode::Full, 0},
                              {{"console", "ttyS0"}});
  ASSERT_TRUE(trace.ok()) << trace.error().to_string();
  EXPECT_EQ(trace.value().bytes_transferred, 150u);
  EXPECT_TRUE(trace.value().success);
  EXPECT_TRUE(trace.value().initial_stage_resident);
  EXPECT_EQ(trace.value().params.at("console"), "ttyS0");
  // Stage chain: firmware, netboot, then one stage per layer.
  ASSERT_GE(trace.value().stages.size(), 4u);
  EXPECT_EQ(trace.value().stages[0].stage, "firmware");
  EXPECT_EQ(trace.value().stages[1].stage, "netboot");
  EXPECT_EQ(sim->node("n1")->phase, NodePhase::MinimalOs);
  EXPECT_EQ(sim->fleet_bytes_transferred(), 150u);
}

TEST(Boot, InsufficientMemory) {
  auto s = Scenario::parse(
      "switch chassis=0\n"
      "node id=tiny chassis=0 port=1 memory=100 phase=PoweredOn\n"
      "image id=big layers=rootfs:200\n");
  ASSERT_TRUE(s.ok());
  auto sim = make_sim(std::move(s).take());
  auto trace =
      sim->boot_node("tiny", *sim->images().find("big"), {TransferSpec::Mode::Full, 0}, {});
  ASSERT_FALSE(trace.ok());
  EXPECT_EQ(trace.code(), Errc::InsufficientMemory);
}

TEST(Boot, LazyModeCountsReadsPlusMetadata) {
  auto s = Scenario::parse(
      "switch chassis=0\n"
      "node id=n1 chassis=0 port=1 memory=1000 phase=PoweredOn\n"
      "image id=base layers=rootfs:100,tools:50\n"
      "read node=n1 layer=0 offset=10 len=10\n");
  ASSERT_TRUE(s.ok());
  auto sim = make_sim(std::move(s).take());
  auto trace = sim->boot_node("n1", *sim->images().find("base"),
                              {TransferSpec::Mode::Lazy, 1 << 20}, {});
  ASSERT_TRUE(trace.ok());
  // 10 bytes read plus 2 metadata units per layer over 2 layers.
  EXPECT_LE(trace.value().bytes_transferred, 14u);
  EXPECT_EQ(trace.value().bytes_transferred, 14u);
}

TEST(Boot, LazyCacheAvoidsRefetch) {
  auto s = Scenario::parse(
      "switch chassis=0\n"
      "node id=n1 chassis=0 port=1 memory=1000 phase=PoweredOn\n"
      "image id=base layers=rootfs:1000\n"
      "read node=n1 layer=0 offset=0 len=100\n"
      "read node=n1 layer=0 offset=0 len=100\n"
      "read node=n1 layer=0 offset=50 len=100\n");
  ASSERT_TRUE(s.ok());
  auto sim = make_sim(std::move(s).take());
  auto trace = sim->boot_node("n1", *sim->images().find("base"),
                              {TransferSpec::Mode::Lazy, 1 << 20}, {});
  ASSERT_TRUE(trace.ok());
  // 100 unique bytes + 50 new bytes + 2 metadata.
  EXPECT_EQ(trace.value().bytes_transferred, 152u);
}

TEST(Boot, CorruptLayerFailsDigestCheck) {
  auto s = small_scenario();
  FaultSpec fault;
  fault.kind = FaultSpec::Kind::CorruptLayer;
  fault.target = "n1";
  fault.layer = 1;
  fault.at = 0;
  s.faults.push_back(fault);
  auto sim = make_sim(std::move(s));
  sim->run_for(1);
  auto trace = sim->boot_node("n1", *sim->images().find("base"),
                              {TransferSpec::Mode::Full, 0}, {});
  ASSERT_FALSE(trace.ok());
  EXPECT_EQ(trace.code(), Errc::DigestMismatch);
  EXPECT_NE(trace.error().detail.find("1"), std::string::npos);
  EXPECT_EQ(sim->node("n1")->phase, NodePhase::Faulted);
}

TEST(Attest, PassAndFailAndUnknown) {
  auto sim = make_sim(small_scenario());
  const ImageManifest* base = sim->images().find("base");
  ASSERT_TRUE(sim->boot_node("n1", *base, {TransferSpec::Mode::Full, 0}, {}).ok());

  auto pass = sim->attest_node("n1", *base);
  ASSERT_TRUE(pass.ok());
  EXPECT_TRUE(pass.value().pass);
  EXPECT_FALSE(pass.value().first_mismatch.has_value());

  // n2 boots with a tampered layer 0; its measured digest differs.
  FaultSpec fault;
  fault.kind = FaultSpec::Kind::CorruptLayer;
  fault.target = "n2";
  fault.layer = 0;
  fault.at = sim->now();
  ASSERT_TRUE(sim->inject_fault(fault).ok());
  sim->run_for(1);
  auto boot = sim->boot_node("n2", *base, {TransferSpec::Mode::Full, 0}, {});
  ASSERT_FALSE(boot.ok());

  auto fail = sim->attest_node("n2", *base);
  ASSERT_TRUE(fail.ok());
  EXPECT_FALSE(fail.value().pass);
  EXPECT_EQ(fail.value().first_mismatch.value(), 0u);
  // The quarantine desire went in through the emergency path.
  auto desire = sim->store().value_of(StateKey{"node", "n2", "phase"}, RecordKind::Desire);
  ASSERT_TRUE(desire.has_value());
  EXPECT_EQ(desire->to_string(), "Quarantined");

  EXPECT_EQ(sim->attest_node("ghost", *base).code(), Errc::UnknownNode);
}

TEST(Oob, StagedLayerSkipsNetworkTransfer) {
  auto sim = make_sim(small_scenario());
  const ImageManifest* base = sim->images().find("base");
  ASSERT_TRUE(sim->stage_artifact_oob("n1", base->layers[0].digest).ok());
  auto trace = sim->boot_node("n1", *base, {TransferSpec::Mode::Full, 0}, {});
  ASSERT_TRUE(trace.ok());
  // Only the unstaged layer crossed the node network.
  EXPECT_EQ(trace.value().bytes_transferred, 50u);
}

TEST(Oob, CredentialsDeniedFromNode) {
  auto sim = make_sim(small_scenario());
  auto creds = sim->node_read_staging_credentials("n1");
  ASSERT_FALSE(creds.ok());
  EXPECT_EQ(creds.code(), Errc::Unauthorized);
  // The denial is on the record; no successful read event type exists.
  bool denied_traced = false;
  for (const auto& line : sim->trace().lines()) {
    if (line.find("oob_denied") != std::string::npos) denied_traced = true;
    EXPECT_EQ(line.find("oob_credential_read"), std::string::npos);
  }
  EXPECT_TRUE(denied_traced);
}

TEST(Oob, BmcDownIsUnreachable) {
  auto sim = make_sim(small_scenario());
  FaultSpec fault;
  fault.kind = FaultSpec::Kind::Crash;
  fault.target = "bmc:n1";
  fault.at = 0;
  fault.duration = 10;
  ASSERT_TRUE(sim->inject_fault(fault).ok());
  sim->run_for(1);
  auto staged = sim->stage_artifact_oob("n1", Digest::of("x"));
  ASSERT_FALSE(staged.ok());
  EXPECT_EQ(staged.code(), Errc::BmcUnreachable);
  sim->run_for(15);  // the window ends
  EXPECT_TRUE(sim->stage_artifact_oob("n1", Digest::of("x")).ok());
}

TEST(Fault, CrashSetsFaultedAtItsTick) {
  auto s = small_scenario();
  FaultSpec fault;
  fault.kind = FaultSpec::Kind::Crash;
  fault.target = "n2";
  fault.at = 50;
  s.faults.push_back(fault);
  auto sim = make_sim(std::move(s));
  sim->run_until(49);
  EXPECT_NE(sim->node("n2")->phase, NodePhase::Faulted);
  sim->run_until(50);
  EXPECT_EQ(sim->node("n2")->phase, NodePhase::Faulted);
}

TEST(Fault, UnknownEntitiesRejected) {
  auto sim = make_sim(small_scenario());
  FaultSpec fault;
  fault.kind = FaultSpec::Kind::Crash;
  fault.target = "n999";
  EXPECT_EQ(sim->inject_fault(fault).code(), Errc::UnknownNode);
  FaultSpec lldp;
  lldp.kind = FaultSpec::Kind::LldpOff;
  lldp.target = "42";
  EXPECT_EQ(sim->inject_fault(lldp).code(), Errc::UnknownSwitch);
}

TEST(Fault, PartitionHermeticity) {
  auto sim = make_sim(small_scenario());
  FaultSpec fault;
  fault.kind = FaultSpec::Kind::Partition;
  fault.groups = {{"n1"}, {"n2"}};
  fault.at = 0;
  fault.duration = 100;
  ASSERT_TRUE(sim->inject_fault(fault).ok());
  sim->run_for(1);

  int delivered = 0;
  sim->net().send("n1", "n2", "probe", [&] { ++delivered; });
  sim->net().send("n2", "n1", "probe", [&] { ++delivered; });
  sim->run_for(5);
  EXPECT_EQ(delivered, 0);
  EXPECT_EQ(sim->net().dropped(), 2u);

  sim->run_until(110);  // window over
  sim->net().send("n1", "n2", "probe", [&] { ++delivered; });
  sim->run_for(5);
  EXPECT_EQ(delivered, 1);
}

TEST(BuildImages, ThreePolicies) {
  ImageRecipe recipe;
  recipe.id = "base";
  recipe.layers = {{"rootfs", 1000}, {"tools", 200}};
  const std::vector<std::string> nodes{"n1", "n2", "n3"};

  auto generalized = build_images(BuildPolicy::Generalized, nodes, recipe);
  ASSERT_TRUE(generalized.ok());
  EXPECT_EQ(generalized.value().size(), 1u);

  auto per_node = build_images(BuildPolicy::PerNode, nodes, recipe);
  ASSERT_TRUE(per_node.ok());
  ASSERT_EQ(per_node.value().size(), 3u);
  std::set<Digest> digests;
  for (const auto& m : per_node.value()) digests.insert(m.digest());
  EXPECT_EQ(digests.size(), 3u);  // fully customized, distinct digests

  auto overlay = build_images(BuildPolicy::OverlayPerNode, nodes, recipe);
  ASSERT_TRUE(overlay.ok());
  ASSERT_EQ(overlay.value().size(), 4u);  // one base + three overlays
  EXPECT_EQ(overlay.value()[0].id, "base");
  for (size_t i = 1; i < 4; ++i) {
    EXPECT_EQ(overlay.value()[i].layers.size(), recipe.layers.size() + 1);
  }

  ImageRecipe empty;
  empty.id = "x";
  EXPECT_EQ(build_images(BuildPolicy::Generalized, nodes, empty).code(),
            Errc::ValidationError);
}

TEST(Simulation, DeterministicTraces) {
  auto run_once = [] {
    auto s = Scenario::parse(
        "seed 99\n"
        "switch chassis=0 ports=64\n"
        "node id=a chassis=0 port=1 phase=PoweredOff\n"
        "node id=b chassis=0 port=2 phase=PoweredOff\n"
        "node id=c chassis=0 port=3 phase=PoweredOff\n"
        "image id=base layers=rootfs:1000,tools:100\n"
        "desire-all prop=phase value=ServicesReady\n"
        "desire-all prop=image value=base\n"
        "orchestrator interval=5 max-parallel=2\n"
        "fault kind=crash node=c at=30\n");
    EXPECT_TRUE(s.ok());
    auto sim = Simulation::create(std::move(s).take());
    EXPECT_TRUE(sim.ok());
    sim.value()->run_until(400);
    return sim.value()->trace().dump();
  };
  const std::string first = run_once();
  const std::string second = run_once();
  EXPECT_FALSE(first.empty());
  EXPECT_EQ(first, second);
}

// Every phase change in a trace has exactly one cause, and action-caused
// changes correspond to a graph edge (success target or failure phase).
TEST(Simulation, PhaseIntegrityOverFaultyRun) {
  auto s = Scenario::parse(
      "seed 13\n"
      "switch chassis=0 ports=64\n"
      "node id=a chassis=0 port=1 phase=PoweredOff\n"
      "node id=b chassis=0 port=2 phase=PoweredOff\n"
      "image id=base layers=rootfs:1000\n"
      "desire-all prop=phase value=ServicesReady\n"
      "desire-all prop=image value=base\n"
      "orchestrator interval=5 max-parallel=4\n"
      "action-failure action=net_boot rate=0.3\n"
      "fault kind=crash node=b at=25\n");
  ASSERT_TRUE(s.ok());
  auto sim = make_sim(std::move(s).take());
  sim->run_for(600);

  const auto& graph = sim->graph();
  size_t checked = 0;
  for (const auto& line : sim->trace().lines()) {
    auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || j.value("type", "") != "phase_change") continue;
    ++checked;
    const auto from = model::phase_from_string(j.value("from", ""));
    const auto to = model::phase_from_string(j.value("to", ""));
    ASSERT_TRUE(from.has_value() && to.has_value());
    const std::string cause = j.value("cause", "");
    if (cause == "action") {
      const model::MutationEdge* edge = graph.find(*from, j.value("detail", ""));
      ASSERT_NE(edge, nullptr) << line;
      EXPECT_TRUE(*to == edge->to || *to == edge->failure) << line;
    } else if (cause == "fault") {
      EXPECT_EQ(*to, NodePhase::Faulted) << line;
    } else {
      ADD_FAILURE() << "phase change without a known cause: " << line;
    }
  }
  EXPECT_GT(checked, 5u);
}

// Attestation soundness and completeness: the verdict is fail iff at least
// one measured digest differs, and the first mismatch is pinpointed.
TEST(Attest, SoundnessCompletenessProperty) {
  Rng rng(55);
  for (int trial = 0; trial < 50; ++trial) {
    auto s = Scenario::parse(
        "seed " + std::to_string(100 + trial) +
        "\n"
        "switch chassis=0 ports=8\n"
        "node id=n chassis=0 port=1 phase=PoweredOn memory=100000\n"
        "image id=base layers=l0:10,l1:10,l2:10,l3:10,l4:10\n");
    ASSERT_TRUE(s.ok());
    auto sim = make_sim(std::move(s).take());
    std::set<size_t> tampered;
    for (size_t layer = 0; layer < 5; ++layer) {
      if (rng.chance(0.4)) tampered.insert(layer);
    }
    for (size_t layer : tampered) {
      FaultSpec fault;
      fault.kind = FaultSpec::Kind::CorruptLayer;
      fault.target = "n";
      fault.layer = layer;
      fault.at = 0;
      ASSERT_TRUE(sim->inject_fault(fault).ok());
    }
    sim->run_for(1);
    const ImageManifest* base = sim->images().find("base");
    (void)sim->boot_node("n", *base, {TransferSpec::Mode::Full, 0}, {});
    auto report = sim->attest_node("n", *base);
    ASSERT_TRUE(report.ok());
    if (tampered.empty()) {
      EXPECT_TRUE(report.value().pass);
    } else {
      EXPECT_FALSE(report.value().pass);
      EXPECT_EQ(report.value().first_mismatch.value(), *tampered.begin());
    }
  }
}

TEST(Boot, LazyCacheEvictsLeastRecentlyUsed) {
  auto s = Scenario::parse(
      "switch chassis=0\n"
      "node id=n1 chassis=0 port=1 memory=10000 phase=PoweredOn\n"
      "image id=base layers=rootfs:1000\n"
      "read node=n1 layer=0 offset=0 len=100\n"    // A
      "read node=n1 layer=0 offset=200 len=100\n"  // B evicts A (cache 150)
      "read node=n1 layer=0 offset=0 len=100\n");  // A again: refetched
  ASSERT_TRUE(s.ok());
  auto sim = make_sim(std::move(s).take());
  auto trace =
      sim->boot_node("n1", *sim->images().find("base"), {TransferSpec::Mode::Lazy, 150}, {});
  ASSERT_TRUE(trace.ok());
  // 100 + 100 + 100 refetched + 2 metadata.
  EXPECT_EQ(trace.value().bytes_transferred, 302u);
}

TEST(Scenario, GraphFileLoadsAndMatchesBuiltin) {
  const std::string path = std::string(FLEET_SOURCE_DIR) + "/data/default.graph";
  auto s = Scenario::parse("switch chassis=0\ngraph file=" + path + "\n");
  ASSERT_TRUE(s.ok()) << s.error().to_string();
  const auto& builtin = model::MutationGraph::default_graph();
  ASSERT_EQ(s.value().graph.edges().size(), builtin.edges().size());
  // Same planner behavior as the built-in graph.
  for (auto from : {NodePhase::PoweredOff, NodePhase::JobRunning, NodePhase::Faulted}) {
    auto a = s.value().graph.plan(from, NodePhase::ServicesReady);
    auto b = builtin.plan(from, NodePhase::ServicesReady);
    ASSERT_TRUE(a.ok());
    ASSERT_TRUE(b.ok());
    EXPECT_EQ(a.value().size(), b.value().size());
  }
}

TEST(Simulation, OrchestratorBootsFleetToDesiredPhase) {
  auto s = Scenario::parse(
      "seed 5\n"
      "switch chassis=0 ports=64\n"
      "node id=a chassis=0 port=1 phase=PoweredOff\n"
      "node id=b chassis=0 port=2 phase=PoweredOff\n"
      "image id=base layers=rootfs:1000\n"
      "desire-all prop=phase value=ServicesReady\n"
      "desire-all prop=image value=base\n"
      "orchestrator interval=5 max-parallel=4\n");
  ASSERT_TRUE(s.ok());
  auto sim = make_sim(std::move(s).take());
  ASSERT_TRUE(sim->run_until_all_phase(NodePhase::ServicesReady, 500));
  // Facts reflect the booted image.
  const Digest base = sim->images().digest_of("base").value();
  for (const auto& id : sim->node_ids()) {
    EXPECT_EQ(sim->node(id)->image.value(), base);
  }
}
