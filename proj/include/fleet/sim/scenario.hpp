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

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fleet/core/ipv6.hpp"
#include "fleet/core/result.hpp"
#include "fleet/model/graph.hpp"
#include "fleet/orch/orchestrator.hpp"
#include "fleet/sim/core.hpp"
#include "fleet/sim/image.hpp"

namespace fleet::sim {

/// Scheduled disturbance. Faults are ordinary events: replaying a scenario
/// with the same seed replays the faults.
struct FaultSpec {
  enum class Kind { Crash, Partition, SlowLink, CorruptLayer, LldpOff };
  Kind kind = Kind::Crash;
  std::string target;  // node id, "bmc:<node>", or switch chassis for lldp_off
  std::vector<std::vector<std::string>> groups;  // partitions
  double factor = 2.0;                           // slow_link
  size_t layer = 0;                              // corrupt_layer
  uint64_t at = 0;
  uint64_t duration = 0;  // 0 = permanent / until cleared
};

const char* to_string(FaultSpec::Kind k);

struct SwitchDecl {
  uint32_t chassis = 0;
  uint16_t ports = 48;
  bool lldp = true;
};

struct NodeDecl {
  std::string id;
  model::TopologyLocation location;
  Mac48 nic;
  uint64_t memory = 1ull << 30;
  model::NodePhase initial_phase = model::NodePhase::Unknown;
  std::optional<std::string> image;  // image id the node starts with
  std::optional<uint64_t> job_ticks; // JobRunning nodes: 0 = endless job
};

struct ReadEntry {
  std::string node;
  size_t layer = 0;
  uint64_t offset = 0;
  uint64_t length = 0;
};

struct StageTiming {
  uint64_t base = 2;
  uint64_t jitter = 1;  // uniform extra in [0, jitter]
};

/// Everything a simulation run needs, declared up front. Text format is
/// line-based (keyword plus key=value fields); see data/scenarios/ for
/// examples.
struct Scenario {
  uint64_t seed = 1;
  double ticks_per_second = 1000.0;
  TraceLevel trace_level = TraceLevel::Full;
  uint64_t net_latency = 1;

  std::vector<SwitchDecl> switches;
  std::vector<NodeDecl> nodes;
  model::MutationGraph graph = model::MutationGraph::default_graph();
  std::vector<ImageRecipe> recipes;
  std::vector<FaultSpec> faults;
  std::vector<ReadEntry> reads;

  Ipv6Prefix site_prefix;  // defaults to fd00::/64
  bool router_enabled = true;

  bool orchestrator_enabled = false;
  orch::ReconcileConfig reconcile;
  std::filesystem::path journal_path;  // empty = in-temp
  uint64_t lazy_cache_bytes = 64ull << 20;
  bool lazy_transfer = false;
  uint64_t metadata_units_per_layer = 2;

  std::map<std::string, StageTiming> stage_timing;  // firmware, netboot, layer, services, action
  std::map<std::string, double> action_failure_rate;

  /// Desires applied at tick 0 (origin "scenario").
  struct InitialDesire {
    state::StateKey key;
    Value value;
  };
  std::vector<InitialDesire> desires;

  Scenario();

  static Result<Scenario> parse(std::string_view text);
  static Result<Scenario> load(const std::filesystem::path& path);
};

}  // namespace fleet::sim
