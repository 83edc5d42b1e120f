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

#include <compare>
#include <string>
#include <string_view>

#include "fleet/core/result.hpp"

namespace fleet::state {

/// (namespace, entity, property) triple identifying one piece of system
/// state, e.g. ("node", "n1", "power"). Ordered lexicographically over the
/// three components; lease ranges are intervals in that order.
struct StateKey {
  std::string ns;
  std::string entity;
  std::string prop;

  auto operator<=>(const StateKey&) const = default;

  bool valid() const { return !ns.empty() && !entity.empty() && !prop.empty(); }

  std::string to_string() const { return ns + "/" + entity + "/" + prop; }

  /// Parses "ns/entity/prop". MalformedKey when a component is empty or missing.
  static Result<StateKey> parse(std::string_view text);
};

inline StateKey key_of(std::string ns, std::string entity, std::string prop) {
  return StateKey{std::move(ns), std::move(entity), std::move(prop)};
}

}  // namespace fleet::state
