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
#include <string>
#include <string_view>
#include <vector>

#include "fleet/core/result.hpp"
#include "fleet/core/value.hpp"

namespace fleet::cfg {

/// Precedence classes, lowest to highest. A higher class wins per key.
enum class Precedence { Base, Site, System, Node };

const char* to_string(Precedence p);

/// One configuration document: dotted keys to typed values, with a
/// precedence class and a scope (whole cluster, or one node). File form:
///
///   layer name=site-defaults precedence=site scope=cluster
///   set image.compute = img-v2
///   set groups.compute.members = n1,n2,n3
///
/// Keys serialize in lexicographic order, so files diff cleanly under
/// version control.
struct ConfigLayer {
  std::string name;
  Precedence precedence = Precedence::Base;
  std::string scope;  // "" = cluster-wide, otherwise a node id
  std::map<std::string, Value> values;

  /// Content digest; identical content yields an identical version id.
  Digest version() const;

  std::string serialize() const;
  static Result<ConfigLayer> parse(std::string_view text);

  /// The key this layer's entries occupy in the effective config: node
  /// scopes prefix their keys with "nodes.<id>." so distinct nodes never
  /// collide.
  std::string effective_key(const std::string& key) const;
};

/// The merged single source of truth, with per-key provenance.
struct EffectiveConfig {
  std::map<std::string, Value> values;
  std::map<std::string, std::string> winner;  // key -> layer name
  Digest stack_version;
};

/// Merges a precedence-ordered stack. Higher precedence wins per key; two
/// layers of equal precedence defining the same effective key is an
/// AmbiguousPrecedence error (one competing source of truth is exactly
/// what layering exists to prevent).
Result<EffectiveConfig> merge_layers(const std::vector<ConfigLayer>& stack);

}  // namespace fleet::cfg
