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

#include "fleet/repl/raft.hpp"

#include <algorithm>

namespace fleet::repl {

const char* to_string(Role r) {
  switch (r) {
    case Role::Follower: return "follower";
    case Role::Candidate: return "candidate";
    case Role::Leader: return "leader";
  }
  return "?";
}

RaftNode::RaftNode(std::string id, std::vector<std::string> peers, uint64_t seed,
                   RaftConfig config)
    : id_(std::move(id)), peers_(std::move(peers)), config_(config), rng_(seed) {
  std::erase(peers_, id_);
  std::sort(peers_.begin(), peers_.end());
  reset_election_timer();
}

RaftNode RaftNode::restore(std::string id, std::vector<std::string> peers, uint64_t seed,
                           DurableState durable, RaftConfig config) {
  RaftNode node(std::move(id), std::move(peers), seed, config);
  node.epoch_ = durable.current_epoch;
  node.voted_for_ = std::move(durable.voted_for);
  node.log_ = std::move(durable.log);
  return node;
}

void RaftNode::reset_election_timer() {
  ticks_until_election_ =
      rng_.range(config_.election_timeout_min, config_.election_timeout_max);
}

std::vector<Message> RaftNode::tick() {
  if (role_ == Role::Leader) {
    if (ticks_until_heartbeat_ == 0 || --ticks_until_heartbeat_ == 0) {
      ticks_until_heartbeat_ = config_.heartbeat_interval;
      std::vector<Message> out;
      out.reserve(peers_.size());
      for (const auto& p : peers_) out.push_back(append_for(p));
      return out;
    }
    return {};
  }
  if (ticks_until_election_ == 0 || --ticks_until_election_ == 0) {
    return become_candidate();
  }
  return {};
}

std::vector<Message> RaftNode::become_candidate() {
  role_ = Role::Candidate;
  ++epoch_;
  voted_for_ = id_;
  votes_ = {id_};
  leader_hint_.reset();
  reset_election_timer();
  const size_t cluster = peers_.size() + 1;
  if (votes_.size() >= cluster / 2 + 1) {
    return become_leader();  // single-replica cluster
  }
  std::vector<Message> out;
  for (const auto& p : peers_) {
    Message m;
    m.type = Message::Type::VoteRequest;
    m.from = id_;
    m.to = p;
    m.epoch = epoch_;
    m.last_log_index = last_log_index();
    m.last_log_epoch = last_log_epoch();
    out.push_back(std::move(m));
  }
  return out;
}

void RaftNode::become_follower(uint64_t epoch) {
  role_ = Role::Follower;
  if (epoch > epoch_) {
    epoch_ = epoch;
    voted_for_.clear();
    leader_hint_.reset();
  }
  votes_.clear();
  reset_election_timer();
}

std::vector<Message> RaftNode::become_leader() {
  role_ = Role::Leader;
  leader_hint_ = id_;
  next_index_.clear();
  match_index_.clear();
  for (const auto& p : peers_) {
    next_index_[p] = last_log_index() + 1;
    match_index_[p] = 0;
  }
  ticks_until_heartbeat_ = config_.heartbeat_interval;
  advance_commit();
  std::vector<Message> out;
  out.reserve(peers_.size());
  for (const auto& p : peers_) out.push_back(append_for(p));
  return out;
}

Message RaftNode::append_for(const std::string& peer) {
  Message m;
  m.type = Message::Type::AppendRequest;
  m.from = id_;
  m.to = peer;
  m.epoch = epoch_;
  const uint64_t next = next_index_[peer];
  m.prev_index = next - 1;
  m.prev_epoch = m.prev_index == 0 ? 0 : log_[m.prev_index - 1].epoch;
  m.commit_index = commit_index_;
  for (uint64_t i = next; i <= last_log_index(); ++i) m.entries.push_back(log_[i - 1]);
  return m;
}

void RaftNode::advance_commit() {
  const size_t cluster = peers_.size() + 1;
  const size_t majority = cluster / 2 + 1;
  for (uint64_t n = last_log_index(); n > commit_index_; --n) {
    // Only entries from the current epoch commit by counting; older ones
    // ride along once a newer entry commits.
    if (log_[n - 1].epoch != epoch_) break;
    size_t acks = 1;  // self
    for (const auto& [peer, match] : match_index_) {
      if (match >= n) ++acks;
    }
    if (acks >= majority) {
      commit_index_ = n;
      break;
    }
  }
}

std::vector<Message> RaftNode::step(const Message& msg) {
  if (msg.to != id_ || msg.from.empty()) {
    ++malformed_dropped_;
    return {};
  }
  if (msg.epoch > epoch_) become_follower(msg.epoch);

  std::vector<Message> out;
  switch (msg.type) {
    case Message::Type::VoteRequest: {
      Message reply;
      reply.type = Message::Type::VoteReply;
      reply.from = id_;
      reply.to = msg.from;
      reply.epoch = epoch_;
      const bool up_to_date =
          msg.last_log_epoch > last_log_epoch() ||
          (msg.last_log_epoch == last_log_epoch() && msg.last_log_index >= last_log_index());
      if (msg.epoch == epoch_ && up_to_date && (voted_for_.empty() || voted_for_ == msg.from)) {
        voted_for_ = msg.from;
        reply.granted = true;
        reset_election_timer();
      }
      out.push_back(std::move(reply));
      break;
    }

    case Message::Type::VoteReply: {
      if (role_ == Role::Candidate && msg.epoch == epoch_ && msg.granted) {
        votes_.insert(msg.from);
        const size_t majority = (peers_.size() + 1) / 2 + 1;
        if (votes_.size() >= majority) return become_leader();
      }
      break;
    }

    case Message::Type::AppendRequest: {
      Message reply;
      reply.type = Message::Type::AppendReply;
      reply.from = id_;
      reply.to = msg.from;
      reply.epoch = epoch_;
      reply.success = false;
      if (msg.epoch < epoch_) {
        out.push_back(std::move(reply));
        break;
      }
      // Valid append from the current epoch's leader.
      if (role_ != Role::Follower) become_follower(msg.epoch);
      leader_hint_ = msg.from;
      reset_election_timer();

      const bool prev_ok =
          msg.prev_index == 0 ||
          (msg.prev_index <= last_log_index() && log_[msg.prev_index - 1].epoch == msg.prev_epoch);
      if (!prev_ok) {
        out.push_back(std::move(reply));
        break;
      }
      for (const auto& entry : msg.entries) {
        if (entry.index <= last_log_index()) {
          if (log_[entry.index - 1].epoch == entry.epoch) continue;  // already have it
          log_.resize(entry.index - 1);  // conflicting suffix goes away
        }
        log_.push_back(entry);
      }
      const uint64_t last_new = msg.prev_index + msg.entries.size();
      if (msg.commit_index > commit_index_) {
        commit_index_ = std::min(msg.commit_index, std::max(last_new, commit_index_));
      }
      reply.success = true;
      reply.match_index = last_new;
      out.push_back(std::move(reply));
      break;
    }

    case Message::Type::AppendReply: {
      if (role_ != Role::Leader || msg.epoch != epoch_) break;
      auto next_it = next_index_.find(msg.from);
      if (next_it == next_index_.end()) {
        ++malformed_dropped_;
        break;
      }
      if (msg.success) {
        match_index_[msg.from] = std::max(match_index_[msg.from], msg.match_index);
        next_it->second = std::max(next_it->second, msg.match_index + 1);
        advance_commit();
      } else {
        if (next_it->second > 1) --next_it->second;
        out.push_back(append_for(msg.from));
      }
      break;
    }
  }
  return out;
}

Result<uint64_t> RaftNode::propose(std::string command) {
  if (role_ != Role::Leader) {
    return Error{Errc::NotLeader, leader_hint_.value_or("")};
  }
  log_.push_back(LogEntry{last_log_index() + 1, epoch_, std::move(command)});
  advance_commit();  // immediate in a single-replica cluster
  return last_log_index();
}

std::vector<LogEntry> RaftNode::take_committed() {
  std::vector<LogEntry> out;
  while (applied_index_ < commit_index_) {
    out.push_back(log_[applied_index_]);
    ++applied_index_;
  }
  return out;
}

}  // namespace fleet::repl
