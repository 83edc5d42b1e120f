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

#include "fleet/repl/harness.hpp"

namespace fleet::repl {

RaftSim::RaftSim(Config config)
    : config_(config), core_(config.seed, config.trace), net_(core_, config.net_latency) {
  std::vector<std::string> ids;
  for (size_t i = 0; i < config_.replicas; ++i) ids.push_back("r" + std::to_string(i));
  for (const auto& id : ids) {
    Member m;
    m.node = std::make_unique<RaftNode>(id, ids, config_.seed ^ fnv1a64(id), config_.raft);
    members_.emplace(id, std::move(m));
  }
}

std::vector<std::string> RaftSim::ids() const {
  std::vector<std::string> out;
  for (const auto& [id, m] : members_) out.push_back(id);
  return out;
}

RaftNode* RaftSim::node(const std::string& id) {
  auto it = members_.find(id);
  return it == members_.end() ? nullptr : it->second.node.get();
}

bool RaftSim::is_up(const std::string& id) const {
  auto it = members_.find(id);
  return it != members_.end() && it->second.up;
}

void RaftSim::send_all(std::vector<Message> msgs) {
  for (auto& msg : msgs) {
    // Round-trip through the wire format: the network carries JSON.
    std::string wire = msg.to_wire();
    net_.send(msg.from, msg.to, to_string(msg.type),
              [this, wire = std::move(wire)] { deliver(wire); });
  }
}

void RaftSim::deliver(const std::string& wire) {
  auto msg = Message::from_wire(wire);
  if (!msg.ok()) {
    ++malformed_;
    return;
  }
  auto it = members_.find(msg.value().to);
  if (it == members_.end() || !it->second.up) return;
  send_all(it->second.node->step(msg.value()));
  observe(it->second);
}

void RaftSim::observe(Member& member) {
  RaftNode& node = *member.node;

  // Election safety: at most one leader per epoch, ever.
  if (node.role() == Role::Leader) {
    auto [it, inserted] = leader_by_epoch_.emplace(node.epoch(), node.id());
    if (!inserted && it->second != node.id()) {
      safety_.election_safety = false;
      safety_.detail = "two leaders in epoch " + std::to_string(node.epoch()) + ": " +
                       it->second + " and " + node.id();
    }
    if (member.last_role != Role::Leader) {
      // Leader completeness: every committed entry must be in the new
      // leader's log.
      for (const auto& [index, entry] : committed_) {
        const auto& log = node.log();
        if (index > log.size() || !(log[index - 1] == entry)) {
          safety_.leader_completeness = false;
          safety_.detail = "leader " + node.id() + " (epoch " +
                           std::to_string(node.epoch()) + ") is missing committed index " +
                           std::to_string(index);
          break;
        }
      }
    }
  }
  member.last_role = node.role();

  for (const auto& entry : node.take_committed()) {
    auto [it, inserted] = committed_.emplace(entry.index, entry);
    if (!inserted && !(it->second == entry)) {
      safety_.agreement = false;
      safety_.detail = "index " + std::to_string(entry.index) + " committed twice with " +
                       "different commands";
    }
  }
}

void RaftSim::tick() {
  for (auto& [id, member] : members_) {
    if (!member.up) continue;
    send_all(member.node->tick());
    observe(member);
  }
  core_.run_for(1);
}

void RaftSim::run(uint64_t ticks) {
  for (uint64_t i = 0; i < ticks; ++i) tick();
}

bool RaftSim::propose_async(const std::string& command) {
  auto leader = current_leader();
  if (!leader.has_value()) return false;
  auto& member = members_.at(*leader);
  auto proposed = member.node->propose(command);
  if (proposed.ok()) observe(member);
  return proposed.ok();
}

Result<uint64_t> RaftSim::propose(const std::string& command, uint64_t deadline_ticks) {
  const uint64_t deadline = core_.now() + deadline_ticks;
  while (core_.now() < deadline) {
    auto leader = current_leader();
    if (!leader.has_value()) {
      tick();
      continue;
    }
    auto& member = members_.at(*leader);
    auto proposed = member.node->propose(command);
    if (!proposed.ok()) {
      tick();
      continue;
    }
    observe(member);
    const uint64_t index = proposed.value();
    const uint64_t epoch = member.node->epoch();
    while (core_.now() < deadline) {
      tick();
      auto it = committed_.find(index);
      if (it != committed_.end()) {
        if (it->second.epoch == epoch && it->second.command == command) return index;
        break;  // a different entry won this slot; the proposal is lost
      }
    }
    return Error{Errc::NoQuorum, "proposal did not commit before the deadline"};
  }
  return Error{Errc::NoQuorum, "no leader reachable before the deadline"};
}

std::optional<std::string> RaftSim::current_leader() const {
  std::optional<std::string> best;
  uint64_t best_epoch = 0;
  for (const auto& [id, member] : members_) {
    if (member.up && member.node->role() == Role::Leader &&
        member.node->epoch() >= best_epoch) {
      best = id;
      best_epoch = member.node->epoch();
    }
  }
  return best;
}

void RaftSim::crash(const std::string& id) {
  auto it = members_.find(id);
  if (it == members_.end() || !it->second.up) return;
  it->second.up = false;
}

void RaftSim::restart(const std::string& id) {
  auto it = members_.find(id);
  if (it == members_.end() || it->second.up) return;
  Member& member = it->second;
  ++member.restarts;
  DurableState durable = member.node->durable();
  member.node = std::make_unique<RaftNode>(RaftNode::restore(
      id, ids(), config_.seed ^ fnv1a64(id) ^ (member.restarts << 17), std::move(durable),
      config_.raft));
  member.last_role = Role::Follower;
  member.up = true;
}

uint64_t RaftSim::partition(std::vector<std::vector<std::string>> groups, uint64_t duration) {
  return net_.partition(std::move(groups), duration);
}

void RaftSim::check_log_matching() {
  std::vector<const RaftNode*> nodes;
  for (const auto& [id, member] : members_) nodes.push_back(member.node.get());
  for (size_t a = 0; a < nodes.size(); ++a) {
    for (size_t b = a + 1; b < nodes.size(); ++b) {
      const auto& la = nodes[a]->log();
      const auto& lb = nodes[b]->log();
      const size_t common = std::min(la.size(), lb.size());
      // If two logs hold an entry with the same (index, epoch), all earlier
      // entries must match.
      for (size_t i = common; i > 0; --i) {
        if (la[i - 1].epoch != lb[i - 1].epoch) continue;
        for (size_t j = 0; j < i; ++j) {
          if (!(la[j] == lb[j])) {
            safety_.agreement = false;
            safety_.detail = "log matching violated between " + nodes[a]->id() + " and " +
                             nodes[b]->id() + " at index " + std::to_string(j + 1);
            return;
          }
        }
        break;
      }
    }
  }
}

GossipSim::GossipSim(Config config) : rng_(config.seed) {
  for (size_t i = 0; i < config.replicas; ++i) {
    state::StateStore::Options opts;
    opts.store_id = "g" + std::to_string(i);
    stores_.push_back(std::make_unique<state::StateStore>(opts));
  }
}

void GossipSim::write_at(size_t replica, const state::StateKey& key, Value value) {
  (void)stores_.at(replica)->put_desire(key, std::move(value), stores_[replica]->id());
}

void GossipSim::partition(std::vector<std::vector<size_t>> groups) {
  group_of_.clear();
  for (size_t g = 0; g < groups.size(); ++g) {
    for (size_t replica : groups[g]) group_of_["g" + std::to_string(replica)] = g;
  }
  partitioned_ = true;
}

void GossipSim::clear_partition() {
  group_of_.clear();
  partitioned_ = false;
}

bool GossipSim::reachable(const std::string& a, const std::string& b) const {
  if (!partitioned_) return true;
  auto ga = group_of_.find(a);
  auto gb = group_of_.find(b);
  if (ga == group_of_.end() || gb == group_of_.end()) return true;
  return ga->second == gb->second;
}

size_t GossipSim::sweep() {
  size_t exchanged = 0;
  for (size_t i = 0; i < stores_.size(); ++i) {
    size_t peer = rng_.below(stores_.size() - 1);
    if (peer >= i) ++peer;
    auto stats = gossip_round(*stores_[i], *stores_[peer],
                              [this](const std::string& a, const std::string& b) {
                                return reachable(a, b);
                              });
    if (stats.ok()) exchanged += stats.value().deltas();
  }
  return exchanged;
}

bool GossipSim::converged() const {
  const std::string first = stores_.front()->canonical_eventual_bytes();
  for (size_t i = 1; i < stores_.size(); ++i) {
    if (stores_[i]->canonical_eventual_bytes() != first) return false;
  }
  return true;
}

std::string GossipSim::canonical(size_t replica) const {
  return stores_.at(replica)->canonical_eventual_bytes();
}

}  // namespace fleet::repl
