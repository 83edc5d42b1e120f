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

#include <set>

#include "fleet/model/graph.hpp"
#include "fleet/model/topology.hpp"
#include "testutil.hpp"

using namespace fleet;
using namespace fleet::model;

namespace {
Ipv6Prefix prefix() { return Ipv6Prefix::parse("fd00::/64").value(); }
}  // namespace

TEST(Identity, ZeroLocation) {
  auto id = derive_identity({0, 0}, prefix());
  EXPECT_EQ(id.address, Ipv6::parse("fd00::0").value());
  EXPECT_EQ(id.hostname, "node-c0-p0");
}

TEST(Identity, BitLayout) {
  auto id = derive_identity({5, 12}, prefix());
  EXPECT_EQ(id.address.to_string(), "fd00::5:0:c:0");
  EXPECT_EQ(id.hostname, "node-c5-p12");
}

TEST(Identity, IndependentOfHardwareAddress) {
  // A replaced node at the same location keeps its address and hostname;
  // the nic plays no part in the derivation.
  auto before = derive_identity({9, 33}, prefix());
  auto after = derive_identity({9, 33}, prefix());
  EXPECT_EQ(before.address, after.address);
  EXPECT_EQ(before.hostname, after.hostname);
}

TEST(Identity, WideChassisValuesStayInjective) {
  auto a = derive_identity({0x00010002, 7}, prefix());
  auto b = derive_identity({0x00020001, 7}, prefix());
  EXPECT_NE(a.address, b.address);
}

TEST(Identity, InjectiveOverSample) {
  // The full [0,1023]x[0,255] sweep runs in the acceptance suite; this is
  // the smoke-sized version.
  std::set<Ipv6> seen;
  std::set<std::string> hostnames;
  for (uint32_t chassis = 0; chassis < 64; ++chassis) {
    for (uint16_t port = 0; port < 64; ++port) {
      auto id = derive_identity({chassis, port}, prefix());
      EXPECT_TRUE(seen.insert(id.address).second);
      EXPECT_TRUE(hostnames.insert(id.hostname).second);
    }
  }
}

TEST(Identity, HardwareAddressEmbedding) {
  auto mac = Mac48::parse("02:00:00:00:00:01").value();
  EXPECT_EQ(address_from_hardware(mac, prefix()).to_string(), "fd00::200:0:0:1");
}

TEST(MutationGraph, PlanIdentityIsEmpty) {
  const auto& g = MutationGraph::default_graph();
  auto plan = g.plan(NodePhase::PoweredOff, NodePhase::PoweredOff);
  ASSERT_TRUE(plan.ok());
  EXPECT_TRUE(plan.value().empty());
}

TEST(MutationGraph, DefaultBootPath) {
  const auto& g = MutationGraph::default_graph();
  auto plan = g.plan(NodePhase::PoweredOff, NodePhase::ServicesReady);
  ASSERT_TRUE(plan.ok());
  std::vector<std::string> actions;
  for (const auto& e : plan.value()) actions.push_back(e.action);
  EXPECT_EQ(actions, (std::vector<std::string>{"power_on", "net_boot", "load_minimal_os",
                                               "start_services"}));
}

TEST(MutationGraph, QuarantinedIsTerminal) {
  const auto& g = MutationGraph::default_graph();
  auto plan = g.plan(NodePhase::Quarantined, NodePhase::ServicesReady);
  ASSERT_FALSE(plan.ok());
  EXPECT_EQ(plan.code(), Errc::Unreachable);
}

// Planner optimality: for every phase pair, the plan length matches the
// breadth-first-search oracle's distance.
TEST(MutationGraph, PlannerMatchesBfsOracle) {
  const auto& g = MutationGraph::default_graph();
  std::vector<NodePhase> phases{
      NodePhase::Unknown,    NodePhase::Discovered, NodePhase::PoweredOff,
      NodePhase::PoweredOn,  NodePhase::NetBooting, NodePhase::MinimalOs,
      NodePhase::ServicesReady, NodePhase::JobRunning, NodePhase::Draining,
      NodePhase::Faulted,    NodePhase::Quarantined};
  for (auto from : phases) {
    for (auto to : phases) {
      const int oracle = testutil::bfs_distance(g, from, to);
      auto plan = g.plan(from, to);
      if (oracle < 0) {
        EXPECT_FALSE(plan.ok()) << to_string(from) << " -> " << to_string(to);
      } else {
        ASSERT_TRUE(plan.ok()) << to_string(from) << " -> " << to_string(to);
        EXPECT_EQ(static_cast<int>(plan.value().size()), oracle)
            << to_string(from) << " -> " << to_string(to);
        // The path is actually walkable.
        NodePhase cur = from;
        for (const auto& e : plan.value()) {
          EXPECT_EQ(e.from, cur);
          cur = e.to;
        }
        EXPECT_EQ(cur, to);
      }
    }
  }
}

TEST(MutationGraph, DeterministicTieBreak) {
  MutationGraph g;
  g.add_edge({NodePhase::PoweredOff, NodePhase::PoweredOn, "zeta", 1, NodePhase::Faulted});
  g.add_edge({NodePhase::PoweredOff, NodePhase::PoweredOn, "alpha", 1, NodePhase::Faulted});
  auto plan = g.plan(NodePhase::PoweredOff, NodePhase::PoweredOn);
  ASSERT_TRUE(plan.ok());
  ASSERT_EQ(plan.value().size(), 1u);
  EXPECT_EQ(plan.value()[0].action, "alpha");
}

TEST(MutationGraph, ParseRoundTripAndErrors) {
  const auto& g = MutationGraph::default_graph();
  auto reparsed = MutationGraph::parse(g.serialize());
  ASSERT_TRUE(reparsed.ok());
  EXPECT_EQ(reparsed.value().edges().size(), g.edges().size());

  EXPECT_FALSE(MutationGraph::parse("edge NotAPhase PoweredOn x").ok());
  EXPECT_FALSE(MutationGraph::parse("edge PoweredOff PoweredOn").ok());
  EXPECT_FALSE(MutationGraph::parse("vertex a").ok());
  auto custom = MutationGraph::parse(
      "edge PoweredOff PoweredOn ignite duration=4 failure=Quarantined\n");
  ASSERT_TRUE(custom.ok());
  EXPECT_EQ(custom.value().edges()[0].duration, 4u);
  EXPECT_EQ(custom.value().edges()[0].failure, NodePhase::Quarantined);
}

TEST(ApplyTransition, SuccessFailureAndInvalid) {
  const auto& g = MutationGraph::default_graph();
  NodeRecord node;
  node.id = "n1";
  node.phase = NodePhase::PoweredOff;

  const MutationEdge* power_on = g.find(NodePhase::PoweredOff, "power_on");
  ASSERT_NE(power_on, nullptr);
  auto on = apply_transition(node, *power_on, Outcome::Success);
  ASSERT_TRUE(on.ok());
  EXPECT_EQ(on.value().phase, NodePhase::PoweredOn);

  const MutationEdge* load = g.find(NodePhase::NetBooting, "load_minimal_os");
  ASSERT_NE(load, nullptr);
  NodeRecord booting = node;
  booting.phase = NodePhase::NetBooting;
  auto failed = apply_transition(booting, *load, Outcome::Failure);
  ASSERT_TRUE(failed.ok());
  EXPECT_EQ(failed.value().phase, NodePhase::Faulted);

  // power_on cannot apply to a node that is already on.
  auto invalid = apply_transition(on.value(), *power_on, Outcome::Success);
  ASSERT_FALSE(invalid.ok());
  EXPECT_EQ(invalid.code(), Errc::InvalidTransition);
}
