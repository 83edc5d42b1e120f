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

#include "fleet/state/record.hpp"

#include <cstdio>

#include <json.hpp>

namespace fleet::state {

using nlohmann::json;

const char* to_string(RecordKind k) {
  return k == RecordKind::Fact ? "fact" : "desire";
}

const char* to_string(Consistency c) {
  return c == Consistency::Strong ? "strong" : "eventual";
}

namespace {

json value_to_json(const Value& v) {
  switch (v.kind()) {
    case Value::Kind::Bool:
      return json{{"b", v.as_bool()}};
    case Value::Kind::Int:
      return json{{"i", v.as_int()}};
    case Value::Kind::Digest:
      return json{{"d", v.as_digest().hex()}};
    case Value::Kind::String:
      return json{{"s", v.as_string()}};
  }
  return {};
}

Result<Value> value_from_json(const json& j) {
  if (j.contains("b")) return Value(j.at("b").get<bool>());
  if (j.contains("i")) return Value(j.at("i").get<int64_t>());
  if (j.contains("s")) return Value(j.at("s").get<std::string>());
  if (j.contains("d")) {
    Digest d;
    if (!Digest::parse_hex(j.at("d").get<std::string>(), d)) {
      return Error{Errc::ParseError, "bad digest in record value"};
    }
    return Value(d);
  }
  return Error{Errc::ParseError, "unknown value encoding"};
}

}  // namespace

std::string StateRecord::serialize() const {
  json vv = json::object();
  for (const auto& [id, n] : this->vv.counters()) vv[id] = n;
  // nlohmann::json objects iterate in sorted key order, so dump() is
  // canonical for equal content.
  json j{
      {"key", key.to_string()},
      {"kind", state::to_string(kind)},
      {"value", value_to_json(value)},
      {"version", version},
      {"vv", std::move(vv)},
      {"owner", owner},
      {"origin", origin},
      {"ts", timestamp},
      {"consistency", state::to_string(consistency)},
  };
  return j.dump();
}

uint64_t StateRecord::fingerprint() const {
  uint64_t h = fnv1a64(key.to_string());
  h = fnv1a64(state::to_string(kind), h);
  h = fnv1a64(value.to_string(), h);
  h = fnv1a64(owner, h);
  h = fnv1a64(origin, h);
  h = fnv1a64(state::to_string(consistency), h);
  char nums[64];
  std::snprintf(nums, sizeof nums, "|%llu|%llu", static_cast<unsigned long long>(version),
                static_cast<unsigned long long>(timestamp));
  h = fnv1a64(nums, h);
  for (const auto& [id, n] : vv.counters()) {
    h = fnv1a64(id, h);
    std::snprintf(nums, sizeof nums, ":%llu", static_cast<unsigned long long>(n));
    h = fnv1a64(nums, h);
  }
  return h;
}

Result<StateRecord> StateRecord::deserialize(std::string_view text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) return Error{Errc::ParseError, "bad record json"};
  StateRecord r;
  auto key = StateKey::parse(j.value("key", ""));
  if (!key.ok()) return key.error();
  r.key = key.value();
  r.kind = j.value("kind", "fact") == std::string("desire") ? RecordKind::Desire
                                                            : RecordKind::Fact;
  auto v = value_from_json(j.value("value", json::object()));
  if (!v.ok()) return v.error();
  r.value = v.value();
  r.version = j.value("version", uint64_t{0});
  if (j.contains("vv")) {
    for (const auto& [id, n] : j.at("vv").items()) r.vv.set(id, n.get<uint64_t>());
  }
  r.owner = j.value("owner", "");
  r.origin = j.value("origin", "");
  r.timestamp = j.value("ts", uint64_t{0});
  r.consistency = j.value("consistency", "eventual") == std::string("strong")
                      ? Consistency::Strong
                      : Consistency::Eventual;
  return r;
}

}  // namespace fleet::state
