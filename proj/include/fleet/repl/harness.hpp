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

#include <memory>
#include <optional>

#include "fleet/repl/gossip.hpp"
#include "fleet/repl/raft.hpp"
#include "fleet/sim/core.hpp"
#include "fleet/state/store.hpp"

namespace fleet::repl {

/// Deterministic cluster of RaftNodes over the simulator's network model.
/// Crashes preserve durable state; partitions drop deliveries. Safety
/// properties (election safety, state-machine agreement on committed
/// entries, leader completeness) are checked continuously as the history
/// unfolds; log matching is checked pairwise on demand.
class RaftSim {
 public:
  struct Config {
    size_t replicas = 3;
    uint64_t seed = 1;
    uint64_t net_latency = 1;
    RaftConfig raft;
    sim::TraceLevel trace = sim::TraceLevel::Off;
  };

  struct SafetyReport {
    bool election_safety = true;
    bool agreement = true;          // one command per committed index
    bool leader_completeness = true;
    std::string detail;
    bool clean() const { return election_safety && agreement && leader_completeness; }
  };

  explicit RaftSim(Config config);

  void tick();
  void run(uint64_t ticks);

  /// Synchronous propose: routes to the leader (following redirects),
  /// then runs the cluster until the entry commits. NoQuorum when no
  /// leader emerges or nothing commits within the deadline.
  Result<uint64_t> propose(const std::string& command, uint64_t deadline_ticks = 200);

  /// Fire-and-forget: hands the command to the current leader if any.
  bool propose_async(const std::string& command);

  void crash(const std::string& id);
  void restart(const std::string& id);
  bool is_up(const std::string& id) const;
  uint64_t partition(std::vector<std::vector<std::string>> groups, uint64_t duration);

  RaftNode* node(const std::string& id);
  std::vector<std::string> ids() const;
  std::optional<std::string> current_leader() const;

  const SafetyReport& safety() const { return safety_; }
  /// Pairwise log-matching check across live replicas.
  void check_log_matching();
  const std::map<uint64_t, LogEntry>& committed() const { return committed_; }

  sim::SimCore& core() { return core_; }

 private:
  struct Member {
    std::unique_ptr<RaftNode> node;
    bool up = true;
    uint64_t restarts = 0;
    Role last_role = Role::Follower;
  };

  void send_all(std::vector<Message> msgs);
  void deliver(const std::string& wire);
  void observe(Member& member);

  Config config_;
  sim::SimCore core_;
  sim::NetworkModel net_;
  std::map<std::string, Member> members_;
  std::map<uint64_t, std::string> leader_by_epoch_;
  std::map<uint64_t, LogEntry> committed_;
  SafetyReport safety_;
  size_t malformed_ = 0;
};

/// N replica stores exchanging eventual records by pairwise anti-entropy.
/// A "sweep" is the epidemic round: every live replica initiates one
/// gossip_round with a uniformly random reachable peer.
class GossipSim {
 public:
  struct Config {
    size_t replicas = 8;
    uint64_t seed = 1;
  };

  explicit GossipSim(Config config);

  state::StateStore& replica(size_t i) { return *stores_[i]; }
  size_t size() const { return stores_.size(); }

  /// Writes a desire at one replica (the usual eventual-write path).
  void write_at(size_t replica, const state::StateKey& key, Value value);

  void partition(std::vector<std::vector<size_t>> groups);
  void clear_partition();

  /// One epidemic round; returns total records exchanged.
  size_t sweep();

  bool converged() const;
  std::string canonical(size_t replica) const;

 private:
  bool reachable(const std::string& a, const std::string& b) const;

  Rng rng_;
  std::vector<std::unique_ptr<state::StateStore>> stores_;
  std::map<std::string, size_t> group_of_;
  bool partitioned_ = false;
};

}  // namespace fleet::repl
