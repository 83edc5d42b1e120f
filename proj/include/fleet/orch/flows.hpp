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

#include <string>
#include <string_view>
#include <vector>

#include "fleet/core/result.hpp"
#include "fleet/core/value.hpp"

namespace fleet::orch {

/// Administrator-defined automation flow: when a node's fact matches the
/// trigger, the action list is enqueued for that node. File form (one flow
/// per line):
///   flow name=reboot-on-fault trigger=phase==Faulted actions=power_cycle,power_on
struct FlowDefinition {
  std::string name;
  std::string trigger_prop;
  Value trigger_equals;
  std::vector<std::string> actions;
  bool enabled = true;

  static Result<std::vector<FlowDefinition>> parse_file(std::string_view text);
};

}  // namespace fleet::orch
