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

#include "fleet/cfg/render.hpp"

#include <json.hpp>

#include "fleet/core/strings.hpp"
#include "fleet/model/phase.hpp"

namespace fleet::cfg {

using nlohmann::json;
using state::StateKey;

Renderer::Renderer(state::StateStore& store, const ImageCatalog& images,
                   std::filesystem::path render_log)
    : store_(store), images_(images), log_(std::move(render_log)) {}

Result<void> Renderer::recover() {
  auto records = log_.read_all();
  if (!records.ok()) return records.error();
  previous_.clear();
  render_seq_ = 0;
  if (records.value().empty()) return {};
  const json j = json::parse(records.value().back(), nullptr, false);
  if (j.is_discarded()) return Error{Errc::IntegrityError, "bad render log record"};
  render_seq_ = j.value("seq", uint64_t{0});
  const json desires = j.value("desires", json::object());
  for (const auto& [k, v] : desires.items()) {
    auto key = StateKey::parse(k);
    if (!key.ok()) return key.error();
    previous_[key.value()] = Value::parse(v.get<std::string>());
  }
  return {};
}

Result<RenderResult> Renderer::render(const EffectiveConfig& effective) {
  // Group definitions first; everything else may fan out over them.
  std::map<std::string, std::vector<std::string>> groups;
  for (const auto& [key, value] : effective.values) {
    auto parts = split(key, '.');
    if (parts.size() == 3 && parts[0] == "groups" && parts[2] == "members") {
      for (auto& m : split(value.to_string(), ',')) {
        if (!m.empty()) groups[parts[1]].push_back(m);
      }
    }
  }

  auto resolve_image = [&](const Value& v) -> Result<Value> {
    if (v.is_digest()) return v;
    const std::string id = v.to_string();
    if (auto digest = images_.digest_of(id)) return Value(*digest);
    return Error{Errc::UnknownImage, "image '" + id + "' is not in the registry"};
  };
  auto resolve_prop = [&](const std::string& prop, const Value& v) -> Result<Value> {
    if (prop == "image") return resolve_image(v);
    if (prop == "phase" && !model::phase_from_string(v.to_string())) {
      return Error{Errc::ValidationError, "unknown phase '" + v.to_string() + "'"};
    }
    if (prop == "replicas" && !v.is_int()) {
      return Error{Errc::ValidationError, "replicas must be an integer"};
    }
    return v;
  };

  std::map<StateKey, Value> target;
  for (const auto& [key, value] : effective.values) {
    auto parts = split(key, '.');
    const std::string& family = parts[0];

    if (family == "groups") {
      if (parts.size() != 3) {
        return Error{Errc::ValidationError, "expected groups.<g>.<prop>: " + key};
      }
      if (parts[2] == "members") continue;
      auto members = groups.find(parts[1]);
      if (members == groups.end()) {
        return Error{Errc::ValidationError,
                     "group '" + parts[1] + "' has no members definition"};
      }
      auto v = resolve_prop(parts[2], value);
      if (!v.ok()) return v.error();
      for (const auto& m : members->second) {
        target[StateKey{"node", m, parts[2]}] = v.value();
      }
      continue;
    }

    if (family == "nodes") {
      if (parts.size() < 3) {
        return Error{Errc::ValidationError, "expected nodes.<id>.<prop>: " + key};
      }
      std::vector<std::string> rest(parts.begin() + 2, parts.end());
      const std::string prop = join(rest, ".");
      auto v = resolve_prop(prop, value);
      if (!v.ok()) return v.error();
      target[StateKey{"node", parts[1], prop}] = v.value();
      continue;
    }

    if (family == "services") {
      if (parts.size() < 3) {
        return Error{Errc::ValidationError, "expected services.<name>.<prop>: " + key};
      }
      std::vector<std::string> rest(parts.begin() + 2, parts.end());
      const std::string prop = join(rest, ".");
      auto v = resolve_prop(prop, value);
      if (!v.ok()) return v.error();
      target[StateKey{"svc", parts[1], prop}] = v.value();
      continue;
    }

    if (family == "cluster") {
      if (parts.size() < 2) {
        return Error{Errc::ValidationError, "expected cluster.<prop>: " + key};
      }
      std::vector<std::string> rest(parts.begin() + 1, parts.end());
      target[StateKey{"cluster", "cluster", join(rest, ".")}] = value;
      continue;
    }

    if (family == "secret") {
      if (parts.size() != 2) {
        return Error{Errc::ValidationError, "expected secret.<name>: " + key};
      }
      target[StateKey{"cluster", "secrets", parts[1]}] = value;
      continue;
    }

    return Error{Errc::ValidationError, "unknown configuration family: " + key};
  }

  RenderResult result;
  result.render_id = "r" + std::to_string(render_seq_ + 1);

  // Changeset against the previous render; only changed desires touch the
  // store, so an identical re-render writes nothing.
  for (const auto& [key, value] : target) {
    auto prev = previous_.find(key);
    if (prev == previous_.end()) {
      result.changes.added.push_back(key);
    } else if (!(prev->second == value)) {
      result.changes.modified.push_back(key);
    } else {
      continue;
    }
    auto written = store_.put_desire(key, value, result.render_id);
    if (!written.ok()) return written.error();
    result.desires.push_back(written.value());
  }
  for (const auto& [key, value] : previous_) {
    if (target.count(key)) continue;
    result.changes.removed.push_back(key);
    if (auto removed = store_.remove_desire(key, result.render_id);
        !removed.ok() && removed.code() != Errc::NotFound) {
      return removed.error();
    }
  }

  ++render_seq_;
  previous_ = std::move(target);

  json desires = json::object();
  for (const auto& [key, value] : previous_) desires[key.to_string()] = value.to_string();
  json record{{"seq", render_seq_},
              {"render_id", result.render_id},
              {"desires", std::move(desires)}};
  if (auto logged = log_.append(record.dump()); !logged.ok()) return logged.error();

  return result;
}

}  // namespace fleet::cfg
