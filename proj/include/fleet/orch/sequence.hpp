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

namespace fleet::orch {

/// "Must be ready before" graph over services or node groups. File form:
///   vertex <name>
///   edge <before> <after>
struct DependencyDag {
  std::vector<std::string> vertices;
  std::vector<std::pair<std::string, std::string>> edges;  // before -> after

  static Result<DependencyDag> parse(std::string_view text);
};

enum class Direction { Startup, Shutdown };

struct SequenceReport {
  enum class Status { Ok, ReadinessFailed, Skipped };
  struct Step {
    std::string vertex;
    Status status = Status::Ok;
  };
  std::vector<Step> steps;  // in execution order
  bool success = true;
};

/// Runs one vertex and answers its readiness probe. The simulator starts
/// and stops services; unit tests use stubs.
class VertexExecutor {
 public:
  virtual ~VertexExecutor() = default;
  virtual Result<void> execute(const std::string& vertex, Direction direction) = 0;
  virtual bool ready(const std::string& vertex, Direction direction) = 0;
};

/// Ordered startup/shutdown over the DAG. Startup walks dependencies in
/// topological order (ties broken by name) and verifies each vertex's
/// readiness before its dependents start; shutdown walks the reverse
/// order. A failed readiness probe (after the configured retries) aborts
/// everything downstream of the failed vertex; independent branches still
/// run, and the report carries the partial state.
Result<SequenceReport> run_sequence(const DependencyDag& dag, Direction direction,
                                    VertexExecutor& executor, uint32_t readiness_retries = 0);

}  // namespace fleet::orch
