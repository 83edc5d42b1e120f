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

#include "fleet/repl/command.hpp"

#include <json.hpp>

#include "fleet/core/strings.hpp"

namespace fleet::repl {

using nlohmann::json;

std::string Command::serialize() const {
  json j;
  switch (op) {
    case Op::PutFact:
      j["op"] = "put_fact";
      j["owner"] = owner;
      j["key"] = key.to_string();
      j["value"] = value.to_string();
      j["version"] = version;
      break;
    case Op::PutDesire:
      j["op"] = "put_desire";
      j["owner"] = owner;
      j["key"] = key.to_string();
      j["value"] = value.to_string();
      break;
    case Op::Transfer:
      j["op"] = "transfer";
      j["lo"] = range.lo.to_string();
      j["hi"] = range.hi.to_string();
      if (from.has_value()) j["from"] = *from;
      j["to"] = to;
      j["epoch"] = epoch;
      break;
  }
  return j.dump();
}

Result<Command> Command::deserialize(std::string_view text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) return Error{Errc::ParseError, "bad command json"};
  Command c;
  const std::string op = j.value("op", "");
  auto parse_key = [&](const char* field) -> Result<state::StateKey> {
    return state::StateKey::parse(j.value(field, ""));
  };
  if (op == "put_fact" || op == "put_desire") {
    c.op = op == "put_fact" ? Op::PutFact : Op::PutDesire;
    c.owner = j.value("owner", "");
    auto key = parse_key("key");
    if (!key.ok()) return key.error();
    c.key = key.value();
    c.value = Value::parse(j.value("value", ""));
    c.version = j.value("version", uint64_t{0});
    return c;
  }
  if (op == "transfer") {
    c.op = Op::Transfer;
    // Range bounds may be sentinel keys with empty components, so split
    // manually instead of going through StateKey::parse.
    auto parts_lo = split(j.value("lo", ""), '/');
    auto parts_hi = split(j.value("hi", ""), '/');
    if (parts_lo.size() != 3 || parts_hi.size() != 3) {
      return Error{Errc::ParseError, "bad transfer range"};
    }
    c.range.lo = state::StateKey{parts_lo[0], parts_lo[1], parts_lo[2]};
    c.range.hi = state::StateKey{parts_hi[0], parts_hi[1], parts_hi[2]};
    if (j.contains("from")) c.from = j.at("from").get<std::string>();
    c.to = j.value("to", "");
    c.epoch = j.value("epoch", uint64_t{0});
    return c;
  }
  return Error{Errc::ParseError, "unknown command op: " + op};
}

Result<void> apply_command(state::StateStore& store, const Command& cmd) {
  switch (cmd.op) {
    case Command::Op::PutFact: {
      auto r = store.put_fact(cmd.owner, cmd.key, cmd.value, cmd.version);
      if (!r.ok()) return r.error();
      return {};
    }
    case Command::Op::PutDesire: {
      auto r = store.put_desire(cmd.key, cmd.value, cmd.owner);
      if (!r.ok()) return r.error();
      return {};
    }
    case Command::Op::Transfer: {
      auto r = store.transfer_ownership(cmd.range, cmd.from, cmd.to, cmd.epoch);
      if (!r.ok()) return r.error();
      return {};
    }
  }
  return Error{Errc::Internal, "unhandled command"};
}

}  // namespace fleet::repl
