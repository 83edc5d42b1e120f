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

#include <json.hpp>

#include "fleet/core/rng.hpp"
#include "fleet/repl/command.hpp"
#include "fleet/repl/gossip.hpp"
#include "fleet/repl/harness.hpp"
#include "fleet/repl/raft.hpp"
#include "testutil.hpp"

using namespace fleet;
using namespace fleet::repl;
using fleet::state::StateKey;
using fleet::state::StateRecord;

namespace {

StateRecord record(const std::string& owner, uint64_t version, uint64_t ts,
                   const std::string& value,
                   std::vector<std::pair<std::string, uint64_t>> vv = {}) {
  StateRecord r;
  r.key = StateKey{"node", "n1", "image"};
  r.kind = state::RecordKind::Desire;
  r.value = Value(value);
  r.owner = owner;
  r.origin = owner;
  r.timestamp = ts;
  r.version = version;
  if (vv.empty()) {
    r.vv.set(owner, version);
  } else {
    for (const auto& [id, n] : vv) r.vv.set(id, n);
  }
  return r;
}

}  // namespace

TEST(VersionVector, PartialOrder) {
  VersionVector a, b;
  a.set("x", 2);
  b.set("x", 1);
  EXPECT_EQ(a.compare(b), VersionVector::Order::After);
  EXPECT_EQ(b.compare(a), VersionVector::Order::Before);
  b.set("y", 1);
  EXPECT_EQ(a.compare(b), VersionVector::Order::Concurrent);
  EXPECT_EQ(a.merged(b).get("x"), 2u);
  EXPECT_EQ(a.merged(b).get("y"), 1u);
  EXPECT_EQ(a.compare(a), VersionVector::Order::Equal);
}

TEST(Merge, Idempotent) {
  auto s = record("p", 1, 5, "v");
  auto merged = merge(s, s);
  ASSERT_TRUE(merged.ok());
  EXPECT_EQ(merged.value(), s);
}

TEST(Merge, DominantVectorWins) {
  auto newer = record("a", 2, 1, "new");
  auto older = record("a", 1, 9, "old");  // later timestamp cannot save it
  EXPECT_EQ(merge(newer, older).value().value.to_string(), "new");
  EXPECT_EQ(merge(older, newer).value().value.to_string(), "new");
}

TEST(Merge, ConcurrentTieBreakIsOrderIndependent) {
  // Incomparable vv{a:1} vs vv{b:1}, equal timestamps, owners p < q: the q
  // record wins under both merge orders.
  auto p = record("p", 1, 7, "from-p", {{"a", 1}});
  auto q = record("q", 1, 7, "from-q", {{"b", 1}});
  EXPECT_EQ(merge(p, q).value().owner, "q");
  EXPECT_EQ(merge(q, p).value().owner, "q");
}

TEST(Merge, KeyMismatch) {
  auto a = record("p", 1, 1, "x");
  auto b = a;
  b.key = StateKey{"node", "n2", "image"};
  EXPECT_EQ(merge(a, b).code(), Errc::KeyMismatch);
}

// Commutativity, associativity, and idempotence over randomly generated
// records, exercising dominance, concurrency, and full ties.
TEST(Merge, AlgebraProperty) {
  Rng rng(2026);
  std::vector<std::string> owners{"p", "q", "r"};
  auto random_record = [&] {
    StateRecord r;
    r.key = StateKey{"node", "n1", "image"};
    r.kind = state::RecordKind::Desire;
    r.value = Value(int64_t(rng.below(3)));
    r.owner = owners[rng.below(owners.size())];
    r.origin = r.owner;
    r.timestamp = rng.below(4);
    for (const auto& id : owners) {
      if (rng.chance(0.7)) r.vv.set(id, rng.below(3));
    }
    r.version = r.vv.get(r.owner);
    return r;
  };
  auto m = [](const StateRecord& a, const StateRecord& b) {
    auto r = merge(a, b);
    EXPECT_TRUE(r.ok());
    return r.value();
  };

  for (int trial = 0; trial < 2000; ++trial) {
    auto a = random_record(), b = random_record(), c = random_record();
    EXPECT_EQ(m(a, a), a);
    EXPECT_EQ(m(a, b), m(b, a));
    EXPECT_EQ(m(m(a, b), c), m(a, m(b, c)));
    // Dominance is always respected.
    if (a.vv.compare(b.vv) == VersionVector::Order::After) EXPECT_EQ(m(a, b), a);
    if (a.vv.compare(b.vv) == VersionVector::Order::Before) EXPECT_EQ(m(a, b), b);
  }
}

TEST(Gossip, IdenticalReplicasExchangeNothing) {
  GossipSim sim({2, 1});
  sim.write_at(0, StateKey{"node", "n1", "image"}, Value("v1"));
  EXPECT_GT(sim.sweep(), 0u);
  ASSERT_TRUE(sim.converged());
  // Converged replicas have nothing left to say.
  auto stats = gossip_round(sim.replica(0), sim.replica(1));
  ASSERT_TRUE(stats.ok());
  EXPECT_EQ(stats.value().deltas(), 0u);
}

TEST(Gossip, NewerVersionPropagates) {
  GossipSim sim({2, 1});
  sim.write_at(0, StateKey{"node", "n1", "image"}, Value("v1"));
  ASSERT_TRUE(gossip_round(sim.replica(0), sim.replica(1)).ok());
  // A newer write at replica 0 overwrites replica 1's copy on the next round.
  sim.write_at(0, StateKey{"node", "n1", "image"}, Value("v2"));
  ASSERT_TRUE(gossip_round(sim.replica(0), sim.replica(1)).ok());
  EXPECT_EQ(sim.replica(1)
                .value_of(StateKey{"node", "n1", "image"}, state::RecordKind::Desire)
                ->to_string(),
            "v2");
}

TEST(Gossip, LocalViewNeverRollsBack) {
  // A lagging replica serves an earlier version on local reads, but a stale
  // replicated record can never replace a newer one.
  GossipSim sim({2, 4});
  const StateKey key{"node", "n1", "image"};
  sim.write_at(0, key, Value("v1"));
  ASSERT_TRUE(gossip_round(sim.replica(0), sim.replica(1)).ok());
  sim.write_at(0, key, Value("v2"));

  // Replica 1 lags: local read returns the earlier version.
  EXPECT_EQ(sim.replica(1).value_of(key, state::RecordKind::Desire)->to_string(), "v1");

  // Replaying the old v1 record into replica 0 changes nothing.
  auto stale = sim.replica(1).get(key, state::RecordKind::Desire).value();
  auto kept = sim.replica(0).apply_replicated(stale);
  ASSERT_TRUE(kept.ok());
  EXPECT_EQ(kept.value().value.to_string(), "v2");
  EXPECT_EQ(sim.replica(0).value_of(key, state::RecordKind::Desire)->to_string(), "v2");
}

TEST(Gossip, PartitionFailsRoundAndLeavesStateUntouched) {
  GossipSim sim({2, 1});
  sim.write_at(0, StateKey{"node", "n1", "image"}, Value("v1"));
  sim.partition({{0}, {1}});
  const std::string before0 = sim.canonical(0);
  const std::string before1 = sim.canonical(1);
  auto stats = gossip_round(sim.replica(0), sim.replica(1),
                            [](const std::string&, const std::string&) { return false; });
  ASSERT_FALSE(stats.ok());
  EXPECT_EQ(stats.code(), Errc::RoundFailed);
  EXPECT_EQ(sim.canonical(0), before0);
  EXPECT_EQ(sim.canonical(1), before1);
}

TEST(Gossip, ConvergenceAfterPartition) {
  GossipSim sim({4, 99});
  Rng rng(5);
  sim.partition({{0, 1}, {2, 3}});
  for (int i = 0; i < 60; ++i) {
    sim.write_at(rng.below(4), StateKey{"node", "n" + std::to_string(rng.below(6)), "image"},
                 Value(int64_t(i)));
    sim.sweep();
  }
  sim.clear_partition();
  for (int round = 0; round < 40; ++round) sim.sweep();
  EXPECT_TRUE(sim.converged());
}

TEST(Message, WireFormatRoundTrip) {
  Message m;
  m.type = Message::Type::AppendRequest;
  m.from = "r0";
  m.to = "r1";
  m.epoch = 3;
  m.prev_index = 4;
  m.prev_epoch = 2;
  m.commit_index = 4;
  m.entries.push_back({5, 3, "cmd"});

  const std::string wire = m.to_wire();
  auto j = nlohmann::json::parse(wire);
  EXPECT_EQ(j["type"], "append_request");
  EXPECT_EQ(j["from"], "r0");
  EXPECT_EQ(j["to"], "r1");
  EXPECT_EQ(j["epoch"], 3);
  EXPECT_TRUE(j.contains("payload"));

  auto back = Message::from_wire(wire);
  ASSERT_TRUE(back.ok());
  EXPECT_EQ(back.value().entries.size(), 1u);
  EXPECT_EQ(back.value().entries[0].command, "cmd");
  EXPECT_FALSE(Message::from_wire("{\"type\":\"dance\"}").ok());
}

TEST(Raft, FollowerAdoptsHigherEpoch) {
  RaftNode node("r0", {"r0", "r1", "r2"}, 1);
  Message append;
  append.type = Message::Type::AppendRequest;
  append.from = "r1";
  append.to = "r0";
  append.epoch = 5;
  auto out = node.step(append);
  EXPECT_EQ(node.epoch(), 5u);
  EXPECT_EQ(node.role(), Role::Follower);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_TRUE(out[0].success);
  EXPECT_EQ(node.leader_hint().value_or(""), "r1");
}

TEST(Raft, LogMatchingRejectsMismatchedPrev) {
  RaftNode node("r0", {"r0", "r1"}, 1);
  Message append;
  append.type = Message::Type::AppendRequest;
  append.from = "r1";
  append.to = "r0";
  append.epoch = 1;
  append.prev_index = 3;  // node's log is empty
  append.prev_epoch = 1;
  append.entries.push_back({4, 1, "x"});
  auto out = node.step(append);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_FALSE(out[0].success);
  EXPECT_TRUE(node.log().empty());
}

TEST(Raft, MalformedMessagesDroppedAndCounted) {
  RaftNode node("r0", {"r0", "r1"}, 1);
  Message wrong_target;
  wrong_target.type = Message::Type::VoteRequest;
  wrong_target.from = "r1";
  wrong_target.to = "r9";
  EXPECT_TRUE(node.step(wrong_target).empty());
  EXPECT_EQ(node.malformed_dropped(), 1u);
}

// Exhaustive model check on a 3-replica cluster: after one replica stands
// for election, every possible delivery order of the resulting messages
// ends with that replica as the sole leader of epoch 1.
TEST(Raft, ElectionModelCheckAllDeliveryOrders) {
  struct World {
    std::vector<RaftNode> nodes;
    std::vector<Message> pending;
  };

  const std::vector<std::string> ids{"r0", "r1", "r2"};
  World initial{{RaftNode("r0", ids, 1), RaftNode("r1", ids, 2), RaftNode("r2", ids, 3)}, {}};

  // Only r0's election timer fires.
  {
    RaftNode& r0 = initial.nodes[0];
    std::vector<Message> out;
    while (out.empty()) out = r0.tick();
    ASSERT_EQ(r0.role(), Role::Candidate);
    initial.pending = std::move(out);
  }

  size_t terminal_states = 0;
  std::function<void(World)> explore = [&](World world) {
    if (world.pending.empty()) {
      ++terminal_states;
      int leaders = 0;
      for (const auto& n : world.nodes) {
        if (n.role() == Role::Leader) {
          ++leaders;
          EXPECT_EQ(n.id(), "r0");
          EXPECT_EQ(n.epoch(), 1u);
        }
      }
      EXPECT_EQ(leaders, 1);
      return;
    }
    for (size_t i = 0; i < world.pending.size(); ++i) {
      World next = world;
      Message msg = next.pending[i];
      next.pending.erase(next.pending.begin() + i);
      for (auto& node : next.nodes) {
        if (node.id() == msg.to) {
          auto out = node.step(msg);
          next.pending.insert(next.pending.end(), out.begin(), out.end());
          break;
        }
      }
      // At every intermediate state, at most one leader per epoch.
      std::map<uint64_t, int> leaders;
      for (const auto& n : next.nodes) {
        if (n.role() == Role::Leader) leaders[n.epoch()] += 1;
      }
      for (const auto& [epoch, count] : leaders) EXPECT_LE(count, 1);
      explore(std::move(next));
    }
  };
  explore(std::move(initial));
  EXPECT_GT(terminal_states, 0u);
}

TEST(RaftSim, SingleReplicaFirstProposeCommitsAtIndexOne) {
  RaftSim sim({1, 7, 1, {}, sim::TraceLevel::Off});
  auto index = sim.propose("first");
  ASSERT_TRUE(index.ok()) << index.error().to_string();
  EXPECT_EQ(index.value(), 1u);
}

TEST(RaftSim, CommitsWithOnePartitionedReplica) {
  RaftSim sim({3, 11, 1, {}, sim::TraceLevel::Off});
  sim.run(30);  // elect someone
  auto leader = sim.current_leader();
  ASSERT_TRUE(leader.has_value());
  // Partition one follower away; a majority of two still commits.
  std::vector<std::string> others;
  for (const auto& id : sim.ids()) {
    if (id != *leader) others.push_back(id);
  }
  sim.partition({{*leader, others[0]}, {others[1]}}, 0);
  auto index = sim.propose("cmd");
  ASSERT_TRUE(index.ok()) << index.error().to_string();
  EXPECT_EQ(sim.committed().count(index.value()), 1u);
}

TEST(RaftSim, MinorityLeaderCannotCommit) {
  RaftSim sim({3, 13, 1, {}, sim::TraceLevel::Off});
  sim.run(30);
  auto leader = sim.current_leader();
  ASSERT_TRUE(leader.has_value());
  std::vector<std::string> others;
  for (const auto& id : sim.ids()) {
    if (id != *leader) others.push_back(id);
  }
  // Isolate the leader in a minority partition.
  sim.partition({{*leader}, {others[0], others[1]}}, 0);
  const size_t committed_before = sim.committed().size();
  auto leader_node = sim.node(*leader);
  auto proposed = leader_node->propose("lost");
  ASSERT_TRUE(proposed.ok());  // appended locally, but it must never commit
  sim.run(60);
  EXPECT_EQ(sim.committed().count(proposed.value()), 0u);
  EXPECT_GE(sim.committed().size(), committed_before);
  EXPECT_TRUE(sim.safety().clean()) << sim.safety().detail;
}

TEST(RaftSim, SafetyUnderCrashesAndPartitions) {
  for (uint64_t seed = 1; seed <= 5; ++seed) {
    RaftSim sim({5, seed, 1, {}, sim::TraceLevel::Off});
    Rng rng(seed * 101);
    size_t proposed = 0;
    std::vector<std::string> down;
    for (int t = 0; t < 600; ++t) {
      sim.tick();
      if (proposed < 40 && rng.chance(0.2)) {
        if (sim.propose_async("cmd-" + std::to_string(proposed))) ++proposed;
      }
      if (rng.chance(0.02) && down.size() + 1 < 3) {
        auto ids = sim.ids();
        const std::string victim = ids[rng.below(ids.size())];
        if (sim.is_up(victim)) {
          sim.crash(victim);
          down.push_back(victim);
        }
      }
      if (!down.empty() && rng.chance(0.05)) {
        sim.restart(down.back());
        down.pop_back();
      }
      if (rng.chance(0.01)) {
        auto ids = sim.ids();
        sim.partition({{ids[0], ids[1], ids[2]}, {ids[3], ids[4]}}, rng.range(10, 40));
      }
    }
    sim.check_log_matching();
    EXPECT_TRUE(sim.safety().clean()) << "seed " << seed << ": " << sim.safety().detail;
  }
}

// Strong reads and writes both pass through the committed log, so any
// recorded history must check out as linearizable against a single
// register.
TEST(RaftSim, StrongHistoryIsLinearizable) {
  RaftSim sim({3, 17, 1, {}, sim::TraceLevel::Off});
  std::vector<testutil::HistoryOp> history;
  std::string register_value = "init";
  Rng rng(3);
  for (int i = 0; i < 10; ++i) {
    const bool is_write = rng.chance(0.5);
    testutil::HistoryOp op;
    op.is_write = is_write;
    op.invoke = sim.core().now();
    if (is_write) {
      op.value = "v" + std::to_string(i);
      auto index = sim.propose("w:" + op.value);
      ASSERT_TRUE(index.ok());
      register_value = op.value;
    } else {
      // A strong read rides the log as a no-op command; its return value is
      // the register at apply time.
      auto index = sim.propose("r");
      ASSERT_TRUE(index.ok());
      op.value = register_value;
    }
    op.ret = sim.core().now();
    history.push_back(op);
  }
  EXPECT_TRUE(testutil::linearizable(history, "init"));
}

TEST(Command, SerializeApplyRoundTrip) {
  state::StateStore store;
  ASSERT_TRUE(
      store.transfer_ownership(state::KeyRange::ns("node"), std::nullopt, "p", 1).ok());

  Command cmd;
  cmd.op = Command::Op::PutFact;
  cmd.owner = "p";
  cmd.key = StateKey{"node", "n1", "power"};
  cmd.value = Value("on");
  cmd.version = 1;

  auto decoded = Command::deserialize(cmd.serialize());
  ASSERT_TRUE(decoded.ok());
  ASSERT_TRUE(apply_command(store, decoded.value()).ok());
  EXPECT_EQ(store.value_of(cmd.key, state::RecordKind::Fact)->to_string(), "on");

  // Identical command logs replay identically on a fresh store.
  state::StateStore replay;
  ASSERT_TRUE(
      replay.transfer_ownership(state::KeyRange::ns("node"), std::nullopt, "p", 1).ok());
  ASSERT_TRUE(apply_command(replay, decoded.value()).ok());
  EXPECT_EQ(replay.value_of(cmd.key, state::RecordKind::Fact)->to_string(), "on");
}
