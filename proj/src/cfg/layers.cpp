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

#include "fleet/cfg/layers.hpp"

#include <algorithm>

#include "fleet/core/strings.hpp"

namespace fleet::cfg {

const char* to_string(Precedence p) {
  switch (p) {
    case Precedence::Base: return "base";
    case Precedence::Site: return "site";
    case Precedence::System: return "system";
    case Precedence::Node: return "node";
  }
  return "?";
}

namespace {
Result<Precedence> precedence_from(std::string_view s) {
  if (s == "base") return Precedence::Base;
  if (s == "site") return Precedence::Site;
  if (s == "system") return Precedence::System;
  if (s == "node") return Precedence::Node;
  return Error{Errc::ParseError, "unknown precedence class: " + std::string(s)};
}
}  // namespace

Digest ConfigLayer::version() const { return Digest::of(serialize()); }

std::string ConfigLayer::serialize() const {
  std::string out = "layer name=" + name + " precedence=" + to_string(precedence) +
                    " scope=" + (scope.empty() ? "cluster" : "node:" + scope) + "\n";
  // std::map iterates keys in lexicographic order: canonical by construction.
  for (const auto& [key, value] : values) {
    out += "set " + key + " = " + value.to_string() + "\n";
  }
  return out;
}

Result<ConfigLayer> ConfigLayer::parse(std::string_view text) {
  ConfigLayer layer;
  bool saw_header = false;
  size_t line_no = 0;
  for (const auto& raw : split(text, '\n')) {
    ++line_no;
    std::string_view line = trim(raw);
    if (auto pos = line.find('#'); pos != std::string_view::npos) line = trim(line.substr(0, pos));
    if (line.empty()) continue;

    if (starts_with(line, "layer ")) {
      if (saw_header) return Error{Errc::ParseError, "multiple layer headers"};
      saw_header = true;
      auto fls = parse_field_lines(line);
      if (!fls.ok()) return fls.error();
      const FieldLine& fl = fls.value().at(0);
      auto name = fl.require("name");
      if (!name.ok()) return name.error();
      layer.name = name.value();
      auto prec = precedence_from(fl.get("precedence", "base"));
      if (!prec.ok()) return prec.error();
      layer.precedence = prec.value();
      const std::string scope = fl.get("scope", "cluster");
      if (scope == "cluster") {
        layer.scope.clear();
      } else if (starts_with(scope, "node:")) {
        layer.scope = scope.substr(5);
        if (layer.scope.empty()) return Error{Errc::ParseError, "empty node scope"};
      } else {
        return Error{Errc::ParseError, "bad scope: " + scope};
      }
      continue;
    }

    if (starts_with(line, "set ")) {
      if (!saw_header) return Error{Errc::ParseError, "set before layer header"};
      auto eq = line.find('=');
      if (eq == std::string_view::npos) {
        return Error{Errc::ParseError,
                     "line " + std::to_string(line_no) + ": expected set KEY = VALUE"};
      }
      const std::string key{trim(line.substr(4, eq - 4))};
      const std::string value{trim(line.substr(eq + 1))};
      if (key.empty()) {
        return Error{Errc::ParseError, "line " + std::to_string(line_no) + ": empty key"};
      }
      if (layer.values.count(key)) {
        return Error{Errc::ParseError,
                     "line " + std::to_string(line_no) + ": duplicate key " + key};
      }
      layer.values.emplace(key, Value::parse(value));
      continue;
    }

    return Error{Errc::ParseError,
                 "line " + std::to_string(line_no) + ": expected 'layer' or 'set'"};
  }
  if (!saw_header) return Error{Errc::ParseError, "missing layer header"};
  return layer;
}

std::string ConfigLayer::effective_key(const std::string& key) const {
  if (scope.empty()) return key;
  return "nodes." + scope + "." + key;
}

Result<EffectiveConfig> merge_layers(const std::vector<ConfigLayer>& stack) {
  EffectiveConfig out;

  // (precedence, effective key) -> defining layer, for conflict detection.
  std::map<std::pair<Precedence, std::string>, const ConfigLayer*> seen;
  std::map<std::string, Precedence> current;

  std::string version_material;
  for (const auto& layer : stack) {
    version_material += layer.version().hex();
    for (const auto& [key, value] : layer.values) {
      const std::string ekey = layer.effective_key(key);
      auto [it, inserted] = seen.try_emplace({layer.precedence, ekey}, &layer);
      if (!inserted) {
        return Error{Errc::AmbiguousPrecedence,
                     "layers '" + it->second->name + "' and '" + layer.name +
                         "' both define " + ekey + " at precedence " +
                         to_string(layer.precedence)};
      }
      auto cur = current.find(ekey);
      if (cur == current.end() || layer.precedence > cur->second) {
        current[ekey] = layer.precedence;
        out.values[ekey] = value;
        out.winner[ekey] = layer.name;
      }
    }
  }
  out.stack_version = Digest::of(version_material);
  return out;
}

}  // namespace fleet::cfg
