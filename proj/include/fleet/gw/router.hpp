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

#include <json.hpp>

#include "fleet/cfg/render.hpp"
#include "fleet/metrics/registry.hpp"
#include "fleet/orch/orchestrator.hpp"
#include "fleet/sim/simulation.hpp"
#include "fleet/state/store.hpp"

namespace fleet::gw {

/// One parsed CLI or API request: a verb plus JSON arguments.
struct Command {
  std::string verb;
  nlohmann::json args = nlohmann::json::object();
};

/// Routes every command to exactly one module operation. Commands are
/// validated before dispatch; mutating commands require the orchestration
/// lease (or the relevant owner lease) to be in place; every request is
/// recorded in the metrics registry under its verb.
class CommandRouter {
 public:
  struct Deps {
    state::StateStore* store = nullptr;
    orch::Orchestrator* orchestrator = nullptr;
    sim::Simulation* sim = nullptr;
    metrics::MetricsRegistry* metrics = nullptr;
    cfg::Renderer* renderer = nullptr;
  };

  explicit CommandRouter(Deps deps) : deps_(deps) {}

  Result<nlohmann::json> apply(const Command& command);

 private:
  Result<nlohmann::json> dispatch(const Command& command);
  Result<void> require_orchestration_lease() const;

  Deps deps_;
};

}  // namespace fleet::gw
