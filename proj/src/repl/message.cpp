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

#include "fleet/repl/message.hpp"

#include <json.hpp>

namespace fleet::repl {

using nlohmann::json;

const char* to_string(Message::Type t) {
  switch (t) {
    case Message::Type::VoteRequest: return "vote_request";
    case Message::Type::VoteReply: return "vote_reply";
    case Message::Type::AppendRequest: return "append_request";
    case Message::Type::AppendReply: return "append_reply";
  }
  return "?";
}

std::string Message::to_wire() const {
  json payload = json::object();
  switch (type) {
    case Type::VoteRequest:
      payload = {{"last_log_index", last_log_index}, {"last_log_epoch", last_log_epoch}};
      break;
    case Type::VoteReply:
      payload = {{"granted", granted}};
      break;
    case Type::AppendRequest: {
      json entries_json = json::array();
      for (const auto& e : entries) {
        entries_json.push_back({{"index", e.index}, {"epoch", e.epoch}, {"command", e.command}});
      }
      payload = {{"prev_index", prev_index},
                 {"prev_epoch", prev_epoch},
                 {"commit_index", commit_index},
                 {"entries", std::move(entries_json)}};
      break;
    }
    case Type::AppendReply:
      payload = {{"success", success}, {"match_index", match_index}};
      break;
  }
  json j{{"type", repl::to_string(type)},
         {"from", from},
         {"to", to},
         {"epoch", epoch},
         {"payload", std::move(payload)}};
  return j.dump();
}

Result<Message> Message::from_wire(std::string_view text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return Error{Errc::ParseError, "bad message json"};
  Message m;
  const std::string type = j.value("type", "");
  if (type == "vote_request") {
    m.type = Type::VoteRequest;
  } else if (type == "vote_reply") {
    m.type = Type::VoteReply;
  } else if (type == "append_request") {
    m.type = Type::AppendRequest;
  } else if (type == "append_reply") {
    m.type = Type::AppendReply;
  } else {
    return Error{Errc::ParseError, "unknown message type: " + type};
  }
  m.from = j.value("from", "");
  m.to = j.value("to", "");
  m.epoch = j.value("epoch", uint64_t{0});
  if (m.from.empty() || m.to.empty()) return Error{Errc::ParseError, "missing endpoints"};
  const json payload = j.value("payload", json::object());
  switch (m.type) {
    case Type::VoteRequest:
      m.last_log_index = payload.value("last_log_index", uint64_t{0});
      m.last_log_epoch = payload.value("last_log_epoch", uint64_t{0});
      break;
    case Type::VoteReply:
      m.granted = payload.value("granted", false);
      break;
    case Type::AppendRequest:
      m.prev_index = payload.value("prev_index", uint64_t{0});
      m.prev_epoch = payload.value("prev_epoch", uint64_t{0});
      m.commit_index = payload.value("commit_index", uint64_t{0});
      for (const auto& e : payload.value("entries", json::array())) {
        m.entries.push_back(LogEntry{e.value("index", uint64_t{0}), e.value("epoch", uint64_t{0}),
                                     e.value("command", std::string{})});
      }
      break;
    case Type::AppendReply:
      m.success = payload.value("success", false);
      m.match_index = payload.value("match_index", uint64_t{0});
      break;
  }
  return m;
}

}  // namespace fleet::repl
