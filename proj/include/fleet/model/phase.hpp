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

#include <optional>
#include <string_view>

namespace fleet::model {

/// Node lifecycle phases. Quarantined is terminal in the default mutation
/// graph and is entered only through attestation failure or operator action.
enum class NodePhase {
  Unknown,
  Discovered,
  PoweredOff,
  PoweredOn,
  NetBooting,
  MinimalOs,
  ServicesReady,
  JobRunning,
  Draining,
  Faulted,
  Quarantined,
};

const char* to_string(NodePhase p);
std::optional<NodePhase> phase_from_string(std::string_view s);

}  // namespace fleet::model
