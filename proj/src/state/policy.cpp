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

#include "fleet/state/policy.hpp"

#include "fleet/core/strings.hpp"

namespace fleet::state {

ConsistencyPolicy ConsistencyPolicy::defaults() {
  ConsistencyPolicy p;
  p.add_rule({"", "", "power", Consistency::Strong});
  p.add_rule({"", "", "phase", Consistency::Strong});
  return p;
}

Result<ConsistencyPolicy> ConsistencyPolicy::parse(std::string_view text) {
  auto lines = parse_field_lines(text);
  if (!lines.ok()) return lines.error();
  ConsistencyPolicy p = defaults();
  for (const auto& fl : lines.value()) {
    Consistency klass;
    if (fl.keyword == "strong") {
      klass = Consistency::Strong;
    } else if (fl.keyword == "eventual") {
      klass = Consistency::Eventual;
    } else {
      return Error{Errc::ParseError,
                   "line " + std::to_string(fl.line_no) + ": expected strong|eventual"};
    }
    p.add_rule({fl.get("ns"), fl.get("entity"), fl.get("prop"), klass});
  }
  return p;
}

Consistency ConsistencyPolicy::classify(const StateKey& key) const {
  const Rule* best = nullptr;
  size_t best_len = 0;
  for (const auto& r : rules_) {
    if (!starts_with(key.ns, r.ns_prefix) || !starts_with(key.entity, r.entity_prefix) ||
        !starts_with(key.prop, r.prop_prefix)) {
      continue;
    }
    const size_t len = r.ns_prefix.size() + r.entity_prefix.size() + r.prop_prefix.size();
    // Later rules win ties so file rules override the built-in defaults.
    if (best == nullptr || len >= best_len) {
      best = &r;
      best_len = len;
    }
  }
  return best ? best->klass : Consistency::Eventual;
}

}  // namespace fleet::state
