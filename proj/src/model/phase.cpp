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

#include "fleet/model/phase.hpp"

#include <array>
#include <utility>

namespace fleet::model {

namespace {
constexpr std::array<std::pair<NodePhase, const char*>, 11> kNames{{
    {NodePhase::Unknown, "Unknown"},
    {NodePhase::Discovered, "Discovered"},
    {NodePhase::PoweredOff, "PoweredOff"},
    {NodePhase::PoweredOn, "PoweredOn"},
    {NodePhase::NetBooting, "NetBooting"},
    {NodePhase::MinimalOs, "MinimalOS"},
    {NodePhase::ServicesReady, "ServicesReady"},
    {NodePhase::JobRunning, "JobRunning"},
    {NodePhase::Draining, "Draining"},
    {NodePhase::Faulted, "Faulted"},
    {NodePhase::Quarantined, "Quarantined"},
}};
}  // namespace

const char* to_string(NodePhase p) {
  for (const auto& [phase, name] : kNames) {
    if (phase == p) return name;
  }
  return "?";
}

std::optional<NodePhase> phase_from_string(std::string_view s) {
  for (const auto& [phase, name] : kNames) {
    if (s == name) return phase;
  }
  return std::nullopt;
}

}  // namespace fleet::model
