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
#include "fleet/model/topology.hpp"

namespace fleet::model {

/// One legal phase transition: applying `action` to a node in `from` takes
/// `duration` simulated ticks and lands in `to` on success or `failure` on
/// failure.
struct MutationEdge {
  NodePhase from = NodePhase::Unknown;
  NodePhase to = NodePhase::Unknown;
  std::string action;
  uint32_t duration = 1;
  NodePhase failure = NodePhase::Faulted;

  bool operator==(const MutationEdge&) const = default;
};

enum class Outcome { Success, Failure };

/// Directed multigraph over node phases; orchestration plans are paths in
/// it. Static per scenario and operator-replaceable via the file format
///   edge <from> <to> <action> [duration=N] [failure=<phase>]
class MutationGraph {
 public:
  static Result<MutationGraph> parse(std::string_view text);

  /// The graph shipped by default: discovery, the boot chain, job
  /// start/drain, reboot, power-cycle recovery, and quarantine edges.
  /// Quarantined has no outgoing edges.
  static const MutationGraph& default_graph();

  void add_edge(MutationEdge e) { edges_.push_back(std::move(e)); }

  /// Minimum-length action path from one phase to another; ties resolved
  /// toward the lexicographically smallest action sequence. Empty when the
  /// phases are equal.
  Result<std::vector<MutationEdge>> plan(NodePhase from, NodePhase to) const;

  const MutationEdge* find(NodePhase from, std::string_view action) const;
  bool has_action(std::string_view action) const;
  const std::vector<MutationEdge>& edges() const { return edges_; }

  std::string serialize() const;

 private:
  std::vector<MutationEdge> edges_;
};

/// Moves a node across one edge. The edge must leave the node's current
/// phase; failure outcomes land in the edge's failure phase. The caller is
/// responsible for recording the new phase as a fact.
Result<NodeRecord> apply_transition(const NodeRecord& node, const MutationEdge& edge,
                                    Outcome outcome);

}  // namespace fleet::model
