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
#include <set>
#include <string>
#include <vector>

#include "fleet/core/record_log.hpp"
#include "fleet/core/result.hpp"
#include "fleet/model/graph.hpp"
#include "fleet/orch/flows.hpp"
#include "fleet/orch/sequence.hpp"
#include "fleet/state/store.hpp"

namespace fleet::orch {

struct ReconcileConfig {
  uint64_t interval = 5;             // sim ticks between passes
  uint32_t max_parallel_actions = 8; // newly dispatched plans per pass
  uint64_t drain_timeout = 50;
  uint32_t readiness_retries = 0;
};

/// One dispatch unit: an ordered action plan for a single entity. Reconcile
/// budgets count plans, and a node never has two plans in flight.
struct DispatchedPlan {
  std::string entity;
  std::vector<std::string> actions;
  bool emergency = false;
  std::string task;  // "" (reconcile), "flow:<name>", or a rolling-update id
};

/// Node- and cluster-side execution, implemented by the simulator. Plans
/// run autonomously to completion on the node side; the dispatcher reports
/// progress back via on_action_complete / on_plan_done, and keeps running
/// even if the orchestrator that dispatched the plan is gone.
class ActionDispatcher {
 public:
  virtual ~ActionDispatcher() = default;
  virtual Result<void> dispatch_plan(const DispatchedPlan& plan) = 0;
  virtual bool has_pending(const std::string& entity) const = 0;
  /// Enforcement plane for cluster-level desires (firewall, access, ...).
  virtual Result<void> apply_cluster_value(const state::StateKey& key, const Value& value) = 0;
};

struct RollingUpdateSpec {
  std::string image_id;
  Digest target;
  uint32_t max_unavailable = 1;
  std::vector<std::string> targets;
};

struct RollingStatus {
  std::string task_id;
  bool done = false;
  uint32_t max_unavailable = 0;
  std::vector<std::string> completed;
  std::vector<std::string> faulted;   // update continued around these
  std::vector<std::string> in_flight;
  size_t total_targets = 0;
};

/// Resumable task state. The completed set plus its digest make corruption
/// detectable; the safety flag decides whether a damaged checkpoint may
/// restart from zero instead of requiring operator action.
struct Checkpoint {
  std::string task_id;
  std::string kind;  // "rolling_update"
  RollingUpdateSpec spec;
  uint64_t cursor = 0;
  std::vector<std::string> completed;
  std::vector<std::string> faulted;
  std::vector<std::string> in_flight;
  Digest completed_digest;
  bool safe_to_repeat = false;
  bool done = false;

  /// True when the recorded digest matches the completed set.
  bool intact() const;

  std::string encode() const;
  static Result<Checkpoint> decode(std::string_view text);
};

struct EmergencyEvent {
  std::string kind;  // firewall_rule | revoke_access | emergency_patch
  std::string arg;   // cidr / user id
  std::string target;          // emergency_patch: node or service id
  std::optional<Digest> image; // emergency_patch
};

/// Converges facts toward desires. One active orchestrator per cluster,
/// enforced by a Strong lease in the state store; every dispatch is
/// preceded by a write-ahead intent record in the journal so a successor
/// can resume without repeating node-side effects.
class Orchestrator {
 public:
  struct Options {
    std::string principal = "orchestrator";
    state::StateKey lease_key{"orch", "cluster", "lease"};
    std::filesystem::path journal_path;
    ReconcileConfig reconcile;
  };

  Orchestrator(state::StateStore& store, const model::MutationGraph& graph,
               ActionDispatcher& dispatcher, Options options);

  /// Claims (or takes over) the orchestration lease at the given epoch.
  Result<void> acquire_lease(uint64_t epoch);
  bool has_lease() const;

  /// One reconciliation pass: computes fleet-wide diffs, plans mutations,
  /// and dispatches at most max_parallel_actions new plans, emergency
  /// diffs first. Write-ahead intents precede every dispatch. Running jobs
  /// are never interrupted: JobRunning nodes are deferred unless an
  /// emergency desire targets them.
  Result<std::vector<DispatchedPlan>> reconcile_once();

  /// Also pumps rolling updates; call once per interval.
  Result<std::vector<DispatchedPlan>> tick();

  Result<std::string> start_rolling_update(const RollingUpdateSpec& spec);
  RollingStatus rolling_status(const std::string& task_id) const;
  bool rolling_done(const std::string& task_id) const;

  Result<SequenceReport> run_sequence(const DependencyDag& dag, Direction direction,
                                      VertexExecutor& executor);

  /// Writes emergency-origin desires; the next reconcile pass dispatches
  /// them ahead of every normal diff.
  Result<std::vector<state::StateRecord>> remediate(const EmergencyEvent& event);

  /// Attestation-failure path: emergency desire driving the node to
  /// Quarantined.
  Result<void> emergency_quarantine(const std::string& node_id);

  Result<uint64_t> register_flow(const FlowDefinition& def);

  /// Resumes a single task from an explicit checkpoint. Completed tasks are
  /// a no-op; corrupt checkpoints of safe-to-repeat tasks restart from
  /// zero, resume-only ones refuse with CheckpointInvalid.
  Result<std::string> resume(const Checkpoint& checkpoint);

  /// Replays the journal after a restart: rebuilds every unfinished task
  /// and its intent set. Nothing is re-dispatched for entities whose
  /// intents are already journaled.
  Result<void> recover();

  // Dispatcher callbacks.
  void on_action_complete(const std::string& entity, const std::string& action,
                          model::Outcome outcome, const std::string& task);
  void on_plan_done(const std::string& entity, bool success, const std::string& task);

  const ReconcileConfig& config() const { return options_.reconcile; }
  const Options& options() const { return options_; }

 private:
  struct RollingTask {
    std::string id;
    RollingUpdateSpec spec;
    uint64_t cursor = 0;
    std::set<std::string> completed;
    std::set<std::string> faulted;
    std::set<std::string> in_flight;
    bool done = false;
    uint64_t deltas_since_snapshot = 0;
  };

  Result<void> journal_append(const std::string& payload);
  void declare_update_desires(const RollingTask& task);
  void journal_task_snapshot(RollingTask& task);
  void journal_task_delta(const std::string& task, const char* event, const std::string& node);
  Result<void> journal_intent(const DispatchedPlan& plan);

  std::optional<model::NodePhase> phase_of(const std::string& node) const;
  std::optional<Digest> image_fact_of(const std::string& node) const;
  std::vector<std::string> update_plan_for(const std::string& node, model::NodePhase phase) const;
  void pump_rolling(std::vector<DispatchedPlan>& dispatched);
  void pump_flows(std::vector<DispatchedPlan>& dispatched, uint32_t& budget);
  Result<void> dispatch(DispatchedPlan plan, std::vector<DispatchedPlan>& dispatched);
  void settle_in_flight(RollingTask& task);
  void finish_task_if_done(RollingTask& task);
  bool covered_by_task(const std::string& entity) const;

  state::StateStore& store_;
  const model::MutationGraph& graph_;
  ActionDispatcher& dispatcher_;
  Options options_;
  RecordFile journal_;

  std::map<std::string, RollingTask> tasks_;
  std::map<std::string, FlowDefinition> flows_;
  uint64_t next_flow_id_ = 1;
  uint64_t next_task_seq_ = 1;
  uint64_t next_emergency_seq_ = 1;
  std::set<std::string> reconcile_in_flight_;  // entities with live reconcile/flow plans
};

}  // namespace fleet::orch
