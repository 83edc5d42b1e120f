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

#include "fleet/orch/sequence.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "fleet/core/strings.hpp"

namespace fleet::orch {

Result<DependencyDag> DependencyDag::parse(std::string_view text) {
  auto lines = parse_field_lines(text);
  if (!lines.ok()) return lines.error();
  DependencyDag dag;
  std::set<std::string> seen;
  for (const auto& fl : lines.value()) {
    if (fl.keyword == "vertex") {
      if (fl.positional.size() != 1) {
        return Error{Errc::ParseError,
                     "line " + std::to_string(fl.line_no) + ": expected vertex <name>"};
      }
      if (!seen.insert(fl.positional[0]).second) {
        return Error{Errc::ParseError, "duplicate vertex " + fl.positional[0]};
      }
      dag.vertices.push_back(fl.positional[0]);
    } else if (fl.keyword == "edge") {
      if (fl.positional.size() != 2) {
        return Error{Errc::ParseError,
                     "line " + std::to_string(fl.line_no) + ": expected edge <before> <after>"};
      }
      dag.edges.emplace_back(fl.positional[0], fl.positional[1]);
    } else {
      return Error{Errc::ParseError,
                   "line " + std::to_string(fl.line_no) + ": expected vertex|edge"};
    }
  }
  for (const auto& [a, b] : dag.edges) {
    if (!seen.count(a) || !seen.count(b)) {
      return Error{Errc::ParseError, "edge references unknown vertex: " + a + " -> " + b};
    }
  }
  return dag;
}

Result<SequenceReport> run_sequence(const DependencyDag& dag, Direction direction,
                                    VertexExecutor& executor, uint32_t readiness_retries) {
  // Dependency direction flips for shutdown: dependents stop first.
  std::map<std::string, std::set<std::string>> needs;  // vertex -> prerequisites
  std::map<std::string, std::set<std::string>> feeds;  // prerequisite -> dependents
  for (const auto& v : dag.vertices) needs[v];
  for (const auto& [before, after] : dag.edges) {
    if (direction == Direction::Startup) {
      needs[after].insert(before);
      feeds[before].insert(after);
    } else {
      needs[before].insert(after);
      feeds[after].insert(before);
    }
  }

  // Kahn's algorithm with a sorted frontier for a deterministic order.
  std::set<std::string> frontier;
  std::map<std::string, size_t> missing;
  for (const auto& [v, pre] : needs) {
    missing[v] = pre.size();
    if (pre.empty()) frontier.insert(v);
  }

  std::vector<std::string> order;
  while (!frontier.empty()) {
    const std::string v = *frontier.begin();
    frontier.erase(frontier.begin());
    order.push_back(v);
    for (const auto& w : feeds[v]) {
      if (--missing[w] == 0) frontier.insert(w);
    }
  }
  if (order.size() != dag.vertices.size()) {
    return Error{Errc::CyclicDependency, "dependency graph has a cycle"};
  }

  SequenceReport report;
  std::set<std::string> failed_or_skipped;
  for (const auto& v : order) {
    const bool blocked = std::any_of(
        needs[v].begin(), needs[v].end(),
        [&](const std::string& pre) { return failed_or_skipped.count(pre) != 0; });
    if (blocked) {
      report.steps.push_back({v, SequenceReport::Status::Skipped});
      failed_or_skipped.insert(v);
      report.success = false;
      continue;
    }
    bool ok = executor.execute(v, direction).ok();
    if (ok) {
      ok = false;
      for (uint32_t attempt = 0; attempt <= readiness_retries && !ok; ++attempt) {
        ok = executor.ready(v, direction);
      }
    }
    if (ok) {
      report.steps.push_back({v, SequenceReport::Status::Ok});
    } else {
      report.steps.push_back({v, SequenceReport::Status::ReadinessFailed});
      failed_or_skipped.insert(v);
      report.success = false;
    }
  }
  return report;
}

}  // namespace fleet::orch
