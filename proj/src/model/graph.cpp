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

#include "fleet/model/graph.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "fleet/core/strings.hpp"

namespace fleet::model {

Result<MutationGraph> MutationGraph::parse(std::string_view text) {
  auto lines = parse_field_lines(text);
  if (!lines.ok()) return lines.error();
  MutationGraph g;
  for (const auto& fl : lines.value()) {
    if (fl.keyword != "edge") {
      return Error{Errc::ParseError,
                   "line " + std::to_string(fl.line_no) + ": expected 'edge'"};
    }
    if (fl.positional.size() != 3) {
      return Error{Errc::ParseError, "line " + std::to_string(fl.line_no) +
                                         ": expected <from> <to> <action>"};
    }
    MutationEdge e;
    auto from = phase_from_string(fl.positional[0]);
    auto to = phase_from_string(fl.positional[1]);
    if (!from || !to) {
      return Error{Errc::ParseError,
                   "line " + std::to_string(fl.line_no) + ": unknown phase"};
    }
    e.from = *from;
    e.to = *to;
    e.action = fl.positional[2];
    auto duration = fl.get_u64("duration", 1);
    if (!duration.ok()) return duration.error();
    e.duration = static_cast<uint32_t>(duration.value());
    if (fl.has("failure")) {
      auto failure = phase_from_string(fl.get("failure"));
      if (!failure) {
        return Error{Errc::ParseError,
                     "line " + std::to_string(fl.line_no) + ": unknown failure phase"};
      }
      e.failure = *failure;
    }
    g.add_edge(std::move(e));
  }
  return g;
}

const MutationGraph& MutationGraph::default_graph() {
  static const MutationGraph g = [] {
    MutationGraph g;
    using P = NodePhase;
    auto edge = [&](P from, P to, const char* action, uint32_t dur, P fail = P::Faulted) {
      g.add_edge(MutationEdge{from, to, action, dur, fail});
    };
    edge(P::Unknown, P::Discovered, "discover", 1, P::Unknown);
    edge(P::Discovered, P::PoweredOff, "ensure_off", 1);
    edge(P::PoweredOff, P::PoweredOn, "power_on", 2);
    edge(P::PoweredOn, P::NetBooting, "net_boot", 2);
    edge(P::NetBooting, P::MinimalOs, "load_minimal_os", 3);
    edge(P::MinimalOs, P::ServicesReady, "start_services", 2);
    edge(P::ServicesReady, P::JobRunning, "start_job", 1, P::ServicesReady);
    edge(P::JobRunning, P::Draining, "drain", 1);
    edge(P::Draining, P::ServicesReady, "complete_drain", 2);
    edge(P::ServicesReady, P::PoweredOff, "power_off", 1);
    edge(P::MinimalOs, P::PoweredOff, "power_off", 1);
    edge(P::PoweredOn, P::PoweredOff, "power_off", 1);
    edge(P::Faulted, P::PoweredOff, "power_cycle", 2);
    for (P from : {P::PoweredOff, P::PoweredOn, P::NetBooting, P::MinimalOs,
                   P::ServicesReady, P::JobRunning, P::Draining, P::Faulted}) {
      edge(from, P::Quarantined, "quarantine", 1, P::Quarantined);
    }
    return g;
  }();
  return g;
}

Result<std::vector<MutationEdge>> MutationGraph::plan(NodePhase from, NodePhase to) const {
  if (from == to) return std::vector<MutationEdge>{};

  // Distance-to-target over reversed edges, then a forward walk that always
  // takes the smallest (action, to) among distance-decreasing edges.
  std::map<NodePhase, uint32_t> dist;
  dist[to] = 0;
  std::deque<NodePhase> frontier{to};
  while (!frontier.empty()) {
    NodePhase cur = frontier.front();
    frontier.pop_front();
    for (const auto& e : edges_) {
      if (e.to != cur || dist.count(e.from)) continue;
      dist[e.from] = dist[cur] + 1;
      frontier.push_back(e.from);
    }
  }
  auto it = dist.find(from);
  if (it == dist.end()) {
    return Error{Errc::Unreachable, std::string(to_string(from)) + " -> " + to_string(to)};
  }

  std::vector<MutationEdge> path;
  NodePhase cur = from;
  while (cur != to) {
    const MutationEdge* best = nullptr;
    for (const auto& e : edges_) {
      if (e.from != cur) continue;
      auto d = dist.find(e.to);
      if (d == dist.end() || d->second + 1 != dist[cur]) continue;
      if (best == nullptr || std::tie(e.action, e.to) < std::tie(best->action, best->to)) {
        best = &e;
      }
    }
    path.push_back(*best);
    cur = best->to;
  }
  return path;
}

const MutationEdge* MutationGraph::find(NodePhase from, std::string_view action) const {
  for (const auto& e : edges_) {
    if (e.from == from && e.action == action) return &e;
  }
  return nullptr;
}

bool MutationGraph::has_action(std::string_view action) const {
  return std::any_of(edges_.begin(), edges_.end(),
                     [&](const MutationEdge& e) { return e.action == action; });
}

std::string MutationGraph::serialize() const {
  std::string out;
  for (const auto& e : edges_) {
    out += "edge ";
    out += to_string(e.from);
    out += ' ';
    out += to_string(e.to);
    out += ' ';
    out += e.action;
    out += " duration=" + std::to_string(e.duration);
    out += " failure=";
    out += to_string(e.failure);
    out += '\n';
  }
  return out;
}

Result<NodeRecord> apply_transition(const NodeRecord& node, const MutationEdge& edge,
                                    Outcome outcome) {
  if (edge.from != node.phase) {
    return Error{Errc::InvalidTransition,
                 node.id + " is " + to_string(node.phase) + ", edge leaves " +
                     to_string(edge.from)};
  }
  NodeRecord updated = node;
  updated.phase = outcome == Outcome::Success ? edge.to : edge.failure;
  return updated;
}

}  // namespace fleet::model
