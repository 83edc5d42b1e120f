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

#include <cstdint>
#include <string>
#include <vector>

#include "fleet/core/result.hpp"

namespace fleet::repl {

/// One entry of the replicated log. (index, epoch) identifies at most one
/// command across all replicas once committed.
struct LogEntry {
  uint64_t index = 0;
  uint64_t epoch = 0;
  std::string command;

  bool operator==(const LogEntry&) const = default;
};

/// Replication message. On the wire this is a JSON object with fields
/// {type, from, to, epoch, payload}; in-process the struct form is used and
/// the JSON codec is exercised by the simulator's network model.
struct Message {
  enum class Type { VoteRequest, VoteReply, AppendRequest, AppendReply };

  Type type = Type::VoteRequest;
  std::string from;
  std::string to;
  uint64_t epoch = 0;

  // VoteRequest
  uint64_t last_log_index = 0;
  uint64_t last_log_epoch = 0;
  // VoteReply
  bool granted = false;
  // AppendRequest
  uint64_t prev_index = 0;
  uint64_t prev_epoch = 0;
  uint64_t commit_index = 0;
  std::vector<LogEntry> entries;
  // AppendReply
  bool success = false;
  uint64_t match_index = 0;

  std::string to_wire() const;
  static Result<Message> from_wire(std::string_view text);
};

const char* to_string(Message::Type t);

}  // namespace fleet::repl
