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

#include "fleet/orch/flows.hpp"

#include "fleet/core/strings.hpp"

namespace fleet::orch {

Result<std::vector<FlowDefinition>> FlowDefinition::parse_file(std::string_view text) {
  auto lines = parse_field_lines(text);
  if (!lines.ok()) return lines.error();
  std::vector<FlowDefinition> out;
  for (const auto& fl : lines.value()) {
    if (fl.keyword != "flow") {
      return Error{Errc::ParseError,
                   "line " + std::to_string(fl.line_no) + ": expected 'flow'"};
    }
    FlowDefinition def;
    auto name = fl.require("name");
    if (!name.ok()) return name.error();
    def.name = name.value();

    auto trigger = fl.require("trigger");
    if (!trigger.ok()) return trigger.error();
    const std::string& t = trigger.value();
    auto eq = t.find("==");
    if (eq == std::string::npos) {
      return Error{Errc::ParseError, "trigger must look like prop==value: " + t};
    }
    def.trigger_prop = t.substr(0, eq);
    def.trigger_equals = Value::parse(t.substr(eq + 2));

    auto actions = fl.require("actions");
    if (!actions.ok()) return actions.error();
    for (auto& a : split(actions.value(), ',')) {
      if (!a.empty()) def.actions.push_back(a);
    }
    if (def.actions.empty()) {
      return Error{Errc::ParseError, "flow " + def.name + " has no actions"};
    }
    def.enabled = fl.get("enabled", "true") != "false";
    out.push_back(std::move(def));
  }
  return out;
}

}  // namespace fleet::orch
