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
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fleet/core/result.hpp"
#include "fleet/core/rng.hpp"
#include "fleet/repl/message.hpp"

namespace fleet::repl {

enum class Role { Follower, Candidate, Leader };
const char* to_string(Role r);

/// State that survives a crash: the replica must remember its epoch, its
/// vote, and every appended entry ("durable append").
struct DurableState {
  uint64_t current_epoch = 0;
  std::string voted_for;
  std::vector<LogEntry> log;
};

struct RaftConfig {
  // Election timeouts are drawn uniformly from [min, max] ticks.
  uint64_t election_timeout_min = 5;
  uint64_t election_timeout_max = 10;
  uint64_t heartbeat_interval = 2;
};

/// Leader-based replicated log for Strong-class keys. The node is a
/// deterministic state machine: transitions happen only in step() and
/// tick(), both of which return the outbound messages to deliver. All
/// randomness (election timeouts) comes from the seeded generator, so a
/// cluster replayed with the same seeds and message schedule produces the
/// same history.
class RaftNode {
 public:
  RaftNode(std::string id, std::vector<std::string> peers, uint64_t seed,
           RaftConfig config = {});

  /// Restores a crashed replica from its durable state. Volatile state
  /// (role, commit index, leader hint) resets.
  static RaftNode restore(std::string id, std::vector<std::string> peers, uint64_t seed,
                          DurableState durable, RaftConfig config = {});

  /// Advances local time by one tick; may start an election or emit
  /// heartbeats.
  std::vector<Message> tick();

  /// Handles one inbound message. Unknown senders and stale shapes are
  /// dropped and counted, never fatal.
  std::vector<Message> step(const Message& msg);

  /// Leader-only: appends a command to the local log and starts replication.
  /// Commitment is observed via take_committed(). NotLeader carries the
  /// current leader hint when one is known.
  Result<uint64_t> propose(std::string command);

  /// Entries committed since the previous call, in log order.
  std::vector<LogEntry> take_committed();

  Role role() const { return role_; }
  uint64_t epoch() const { return epoch_; }
  uint64_t commit_index() const { return commit_index_; }
  const std::vector<LogEntry>& log() const { return log_; }
  const std::string& id() const { return id_; }
  std::optional<std::string> leader_hint() const { return leader_hint_; }
  size_t malformed_dropped() const { return malformed_dropped_; }

  DurableState durable() const { return DurableState{epoch_, voted_for_, log_}; }

 private:
  std::vector<Message> become_candidate();
  void become_follower(uint64_t epoch);
  std::vector<Message> become_leader();
  Message append_for(const std::string& peer);
  void advance_commit();
  void reset_election_timer();
  uint64_t last_log_index() const { return log_.size(); }
  uint64_t last_log_epoch() const { return log_.empty() ? 0 : log_.back().epoch; }

  std::string id_;
  std::vector<std::string> peers_;  // excluding self
  RaftConfig config_;
  Rng rng_;

  Role role_ = Role::Follower;
  uint64_t epoch_ = 0;
  std::string voted_for_;
  std::vector<LogEntry> log_;  // 1-based indexing: log_[i-1] has index i
  uint64_t commit_index_ = 0;
  uint64_t applied_index_ = 0;
  std::optional<std::string> leader_hint_;

  uint64_t ticks_until_election_ = 0;
  uint64_t ticks_until_heartbeat_ = 0;
  std::set<std::string> votes_;
  std::map<std::string, uint64_t> next_index_;
  std::map<std::string, uint64_t> match_index_;
  size_t malformed_dropped_ = 0;
};

}  // namespace fleet::repl
