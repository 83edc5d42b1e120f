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

#include "fleet/orch/orchestrator.hpp"

#include <algorithm>

#include <json.hpp>

#include "fleet/core/strings.hpp"

namespace fleet::orch {

using nlohmann::json;
using model::NodePhase;
using state::RecordKind;
using state::StateKey;

namespace {

Digest completed_set_digest(const std::vector<std::string>& completed) {
  std::vector<std::string> sorted = completed;
  std::sort(sorted.begin(), sorted.end());
  return Digest::of(join(sorted, ","));
}

bool is_emergency_origin(const std::string& origin) {
  return starts_with(origin, "emergency:");
}

}  // namespace

bool Checkpoint::intact() const {
  return completed_set_digest(completed) == completed_digest;
}

std::string Checkpoint::encode() const {
  json j{{"t", "ru_snap"},
         {"task", task_id},
         {"kind", kind},
         {"image_id", spec.image_id},
         {"target", spec.target.hex()},
         {"max_unavailable", spec.max_unavailable},
         {"targets", spec.targets},
         {"cursor", cursor},
         {"completed", completed},
         {"faulted", faulted},
         {"in_flight", in_flight},
         {"completed_digest", completed_digest.hex()},
         {"safe_to_repeat", safe_to_repeat},
         {"done", done}};
  return j.dump();
}

Result<Checkpoint> Checkpoint::decode(std::string_view text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    return Error{Errc::CheckpointInvalid, "unparseable checkpoint"};
  }
  Checkpoint cp;
  cp.task_id = j.value("task", "");
  cp.kind = j.value("kind", "rolling_update");
  cp.spec.image_id = j.value("image_id", "");
  Digest::parse_hex(j.value("target", "0"), cp.spec.target);
  cp.spec.max_unavailable = j.value("max_unavailable", uint32_t{1});
  cp.spec.targets = j.value("targets", std::vector<std::string>{});
  cp.cursor = j.value("cursor", uint64_t{0});
  cp.completed = j.value("completed", std::vector<std::string>{});
  cp.faulted = j.value("faulted", std::vector<std::string>{});
  cp.in_flight = j.value("in_flight", std::vector<std::string>{});
  Digest::parse_hex(j.value("completed_digest", "0"), cp.completed_digest);
  cp.safe_to_repeat = j.value("safe_to_repeat", false);
  cp.done = j.value("done", false);
  if (cp.task_id.empty()) return Error{Errc::CheckpointInvalid, "checkpoint without task id"};
  return cp;
}

Orchestrator::Orchestrator(state::StateStore& store, const model::MutationGraph& graph,
                           ActionDispatcher& dispatcher, Options options)
    : store_(store),
      graph_(graph),
      dispatcher_(dispatcher),
      options_(std::move(options)),
      journal_(options_.journal_path.empty() ? std::filesystem::path("orchestrator.journal")
                                             : options_.journal_path) {}

Result<void> Orchestrator::acquire_lease(uint64_t epoch) {
  auto current = store_.lease_for(options_.lease_key);
  std::optional<std::string> from;
  if (current.has_value()) from = current->owner;
  auto lease = store_.transfer_ownership(state::KeyRange::single(options_.lease_key), from,
                                         options_.principal, epoch);
  if (!lease.ok()) return lease.error();
  return {};
}

bool Orchestrator::has_lease() const {
  auto lease = store_.lease_for(options_.lease_key);
  return lease.has_value() && lease->owner == options_.principal;
}

Result<void> Orchestrator::journal_append(const std::string& payload) {
  return journal_.append(payload);
}

void Orchestrator::journal_task_snapshot(RollingTask& task) {
  Checkpoint cp;
  cp.task_id = task.id;
  cp.kind = "rolling_update";
  cp.spec = task.spec;
  cp.cursor = task.cursor;
  cp.completed.assign(task.completed.begin(), task.completed.end());
  cp.faulted.assign(task.faulted.begin(), task.faulted.end());
  cp.in_flight.assign(task.in_flight.begin(), task.in_flight.end());
  cp.completed_digest = completed_set_digest(cp.completed);
  cp.done = task.done;
  (void)journal_append(cp.encode());
  task.deltas_since_snapshot = 0;
}

void Orchestrator::journal_task_delta(const std::string& task, const char* event,
                                      const std::string& node) {
  (void)journal_append(json{{"t", "ru_delta"}, {"task", task}, {"event", event}, {"node", node}}
                           .dump());
  auto it = tasks_.find(task);
  if (it != tasks_.end() && ++it->second.deltas_since_snapshot >= 128) {
    journal_task_snapshot(it->second);
  }
}

Result<void> Orchestrator::journal_intent(const DispatchedPlan& plan) {
  return journal_append(json{{"t", "intent"},
                             {"task", plan.task},
                             {"entity", plan.entity},
                             {"actions", plan.actions},
                             {"emergency", plan.emergency}}
                            .dump());
}

std::optional<NodePhase> Orchestrator::phase_of(const std::string& node) const {
  auto v = store_.value_of(StateKey{"node", node, "phase"}, RecordKind::Fact);
  if (!v.has_value()) return std::nullopt;
  return model::phase_from_string(v->to_string());
}

std::optional<Digest> Orchestrator::image_fact_of(const std::string& node) const {
  auto v = store_.value_of(StateKey{"node", node, "image"}, RecordKind::Fact);
  if (!v.has_value() || !v->is_digest()) return std::nullopt;
  return v->as_digest();
}

bool Orchestrator::covered_by_task(const std::string& entity) const {
  for (const auto& [id, task] : tasks_) {
    if (task.done) continue;
    if (std::binary_search(task.spec.targets.begin(), task.spec.targets.end(), entity)) {
      return true;
    }
  }
  return false;
}

Result<void> Orchestrator::dispatch(DispatchedPlan plan, std::vector<DispatchedPlan>& dispatched) {
  if (auto logged = journal_intent(plan); !logged.ok()) return logged;
  if (auto sent = dispatcher_.dispatch_plan(plan); !sent.ok()) return sent;
  if (plan.task.empty() || starts_with(plan.task, "flow:")) {
    reconcile_in_flight_.insert(plan.entity);
  }
  dispatched.push_back(std::move(plan));
  return {};
}

Result<std::vector<DispatchedPlan>> Orchestrator::reconcile_once() {
  if (!has_lease()) {
    return Error{Errc::LeaseLost, options_.principal + " no longer holds the lease"};
  }

  struct EntityDiff {
    std::string ns;
    std::string entity;
    bool emergency = false;
    std::vector<state::StateStore::DiffEntry> entries;
  };
  std::map<std::pair<std::string, std::string>, EntityDiff> by_entity;
  for (auto& d : store_.diff_all()) {
    auto& e = by_entity[{d.key.ns, d.key.entity}];
    e.ns = d.key.ns;
    e.entity = d.key.entity;
    e.emergency = e.emergency || is_emergency_origin(d.desire_origin);
    e.entries.push_back(std::move(d));
  }

  // Emergency diffs jump the queue; order is otherwise by (ns, entity).
  std::vector<const EntityDiff*> order;
  order.reserve(by_entity.size());
  for (const auto& [key, e] : by_entity) {
    if (e.emergency) order.push_back(&e);
  }
  for (const auto& [key, e] : by_entity) {
    if (!e.emergency) order.push_back(&e);
  }

  std::vector<DispatchedPlan> dispatched;
  uint32_t budget = options_.reconcile.max_parallel_actions;

  for (const EntityDiff* diff : order) {
    if (budget == 0) break;
    const std::string& entity = diff->entity;
    if (dispatcher_.has_pending(entity) || reconcile_in_flight_.count(entity)) continue;

    if (diff->ns != "node") {
      // Service and cluster desires go to the enforcement plane.
      DispatchedPlan plan;
      plan.entity = entity;
      plan.emergency = diff->emergency;
      bool any = false;
      for (const auto& entry : diff->entries) {
        if (!entry.desire.has_value()) continue;
        if (dispatcher_.apply_cluster_value(entry.key, *entry.desire).ok()) {
          plan.actions.push_back("apply:" + entry.key.prop);
          any = true;
        }
      }
      if (any) {
        (void)journal_intent(plan);
        dispatched.push_back(std::move(plan));
        --budget;
      }
      continue;
    }

    if (covered_by_task(entity)) continue;

    const NodePhase phase = phase_of(entity).value_or(NodePhase::Unknown);

    std::optional<NodePhase> desired_phase;
    std::optional<Digest> desired_image;
    std::vector<const state::StateStore::DiffEntry*> other_props;
    for (const auto& entry : diff->entries) {
      if (entry.key.prop == "phase" && entry.desire.has_value()) {
        desired_phase = model::phase_from_string(entry.desire->to_string());
      } else if (entry.key.prop == "image" && entry.desire.has_value() &&
                 entry.desire->is_digest()) {
        desired_image = entry.desire->as_digest();
      } else if (entry.desire.has_value()) {
        other_props.push_back(&entry);
      }
    }

    // Running work is never interrupted by plain reconciliation; only an
    // emergency desire (quarantine) may touch a JobRunning node.
    const bool protected_phase = phase == NodePhase::JobRunning || phase == NodePhase::Draining;
    if (protected_phase && !diff->emergency) continue;

    std::vector<std::string> actions;
    if (desired_phase == NodePhase::Quarantined) {
      if (auto path = graph_.plan(phase, NodePhase::Quarantined); path.ok()) {
        for (const auto& e : path.value()) actions.push_back(e.action);
      }
    } else if (desired_image.has_value() && image_fact_of(entity) != desired_image) {
      const NodePhase target = desired_phase.value_or(NodePhase::ServicesReady);
      const bool running = phase == NodePhase::PoweredOn || phase == NodePhase::NetBooting ||
                           phase == NodePhase::MinimalOs || phase == NodePhase::ServicesReady;
      if (running) {
        // Reboot into the new image: down to PoweredOff, then the boot chain.
        auto down = graph_.plan(phase, NodePhase::PoweredOff);
        auto up = graph_.plan(NodePhase::PoweredOff, target);
        if (down.ok() && up.ok()) {
          for (const auto& e : down.value()) actions.push_back(e.action);
          for (const auto& e : up.value()) actions.push_back(e.action);
        }
      } else if (auto path = graph_.plan(phase, target); path.ok()) {
        for (const auto& e : path.value()) actions.push_back(e.action);
      }
    } else if (desired_phase.has_value() && phase != *desired_phase) {
      if (auto path = graph_.plan(phase, *desired_phase); path.ok()) {
        for (const auto& e : path.value()) actions.push_back(e.action);
      }
    }

    if (actions.empty() && !other_props.empty()) {
      // Node-scoped configuration values (boot parameters and the like).
      DispatchedPlan plan;
      plan.entity = entity;
      plan.emergency = diff->emergency;
      for (const auto* entry : other_props) {
        if (dispatcher_.apply_cluster_value(entry->key, *entry->desire).ok()) {
          plan.actions.push_back("apply:" + entry->key.prop);
        }
      }
      if (!plan.actions.empty()) {
        (void)journal_intent(plan);
        dispatched.push_back(std::move(plan));
        --budget;
      }
      continue;
    }
    if (actions.empty()) continue;

    DispatchedPlan plan;
    plan.entity = entity;
    plan.actions = std::move(actions);
    plan.emergency = diff->emergency;
    if (dispatch(std::move(plan), dispatched).ok()) --budget;
  }

  pump_flows(dispatched, budget);
  return dispatched;
}

void Orchestrator::pump_flows(std::vector<DispatchedPlan>& dispatched, uint32_t& budget) {
  if (flows_.empty() || budget == 0) return;
  const auto facts = store_.snapshot(RecordKind::Fact);
  for (const auto& [name, flow] : flows_) {
    if (!flow.enabled) continue;
    for (const auto& rec : facts) {
      if (budget == 0) return;
      if (rec.key.ns != "node" || rec.key.prop != flow.trigger_prop) continue;
      if (!(rec.value == flow.trigger_equals)) continue;
      const std::string& entity = rec.key.entity;
      if (dispatcher_.has_pending(entity) || reconcile_in_flight_.count(entity)) continue;
      if (covered_by_task(entity)) continue;
      DispatchedPlan plan;
      plan.entity = entity;
      plan.actions = flow.actions;
      plan.task = "flow:" + name;
      if (dispatch(std::move(plan), dispatched).ok()) --budget;
    }
  }
}

Result<std::vector<DispatchedPlan>> Orchestrator::tick() {
  auto dispatched = reconcile_once();
  if (!dispatched.ok()) return dispatched;
  auto out = std::move(dispatched).take();
  pump_rolling(out);
  return out;
}

std::vector<std::string> Orchestrator::update_plan_for(const std::string& node,
                                                       NodePhase phase) const {
  std::vector<std::string> actions;
  auto extend = [&](const Result<std::vector<model::MutationEdge>>& path) {
    if (!path.ok()) return false;
    for (const auto& e : path.value()) actions.push_back(e.action);
    return true;
  };
  // Jobs drain first, never killed; everyone else reboots through
  // PoweredOff so the boot chain loads the new image.
  if (phase == NodePhase::JobRunning) {
    const auto* drain = graph_.find(NodePhase::JobRunning, "drain");
    if (drain == nullptr) return {};
    actions.push_back(drain->action);
    if (!extend(graph_.plan(drain->to, NodePhase::PoweredOff))) return {};
  } else if (phase != NodePhase::PoweredOff) {
    if (!extend(graph_.plan(phase, NodePhase::PoweredOff))) return {};
  }
  if (!extend(graph_.plan(NodePhase::PoweredOff, NodePhase::ServicesReady))) return {};
  (void)node;
  return actions;
}

void Orchestrator::declare_update_desires(const RollingTask& task) {
  const std::string origin = "update:" + task.id;
  for (const auto& node : task.spec.targets) {
    const StateKey key{"node", node, "image"};
    auto existing = store_.value_of(key, RecordKind::Desire);
    if (!existing.has_value() || !(Value(task.spec.target) == *existing)) {
      (void)store_.put_desire(key, Value(task.spec.target), origin);
    }
  }
}

Result<std::string> Orchestrator::start_rolling_update(const RollingUpdateSpec& spec) {
  if (spec.max_unavailable == 0) {
    return Error{Errc::InvalidPlan, "max_unavailable must be >= 1"};
  }
  if (spec.targets.empty()) {
    return Error{Errc::InvalidPlan, "no target nodes"};
  }
  if (!has_lease()) {
    return Error{Errc::LeaseLost, options_.principal + " no longer holds the lease"};
  }

  RollingTask task;
  task.id = "ru-" + std::to_string(next_task_seq_++);
  task.spec = spec;
  std::sort(task.spec.targets.begin(), task.spec.targets.end());
  task.spec.targets.erase(std::unique(task.spec.targets.begin(), task.spec.targets.end()),
                          task.spec.targets.end());

  // Declare the target desire for every node up front; the window below
  // controls how fast facts are allowed to chase it.
  declare_update_desires(task);

  auto [it, inserted] = tasks_.emplace(task.id, std::move(task));
  journal_task_snapshot(it->second);

  std::vector<DispatchedPlan> dispatched;
  pump_rolling(dispatched);
  return it->first;
}

void Orchestrator::settle_in_flight(RollingTask& task) {
  std::vector<std::string> settled;
  for (const auto& node : task.in_flight) {
    if (dispatcher_.has_pending(node)) continue;
    const NodePhase phase = phase_of(node).value_or(NodePhase::Unknown);
    const auto image = image_fact_of(node);
    if (image == task.spec.target && phase == NodePhase::ServicesReady) {
      task.completed.insert(node);
      journal_task_delta(task.id, "complete", node);
      settled.push_back(node);
    } else if (phase == NodePhase::Faulted || phase == NodePhase::Quarantined) {
      task.faulted.insert(node);
      journal_task_delta(task.id, "fault", node);
      settled.push_back(node);
    }
    // Otherwise the node finished a partial plan (e.g. resumed mid-update);
    // pump_rolling dispatches a continuation from its current phase.
  }
  for (const auto& node : settled) task.in_flight.erase(node);
}

void Orchestrator::finish_task_if_done(RollingTask& task) {
  if (!task.done && task.cursor >= task.spec.targets.size() && task.in_flight.empty()) {
    task.done = true;
    journal_task_snapshot(task);
  }
}

void Orchestrator::pump_rolling(std::vector<DispatchedPlan>& dispatched) {
  for (auto& [id, task] : tasks_) {
    if (task.done) continue;
    settle_in_flight(task);

    // Continuation for nodes whose previous plan ended short of the goal.
    for (const auto& node : task.in_flight) {
      if (dispatcher_.has_pending(node)) continue;
      const NodePhase phase = phase_of(node).value_or(NodePhase::Unknown);
      auto actions = update_plan_for(node, phase);
      if (actions.empty()) continue;
      DispatchedPlan plan;
      plan.entity = node;
      plan.actions = std::move(actions);
      plan.task = task.id;
      (void)dispatch(std::move(plan), dispatched);
    }

    while (task.in_flight.size() < task.spec.max_unavailable &&
           task.cursor < task.spec.targets.size()) {
      const std::string node = task.spec.targets[task.cursor++];
      if (task.completed.count(node) || task.faulted.count(node) ||
          task.in_flight.count(node)) {
        continue;
      }
      const NodePhase phase = phase_of(node).value_or(NodePhase::Unknown);
      if (image_fact_of(node) == task.spec.target && phase == NodePhase::ServicesReady) {
        task.completed.insert(node);
        journal_task_delta(task.id, "complete", node);
        continue;
      }
      if (phase == NodePhase::Quarantined) {
        task.faulted.insert(node);
        journal_task_delta(task.id, "fault", node);
        continue;
      }
      auto actions = update_plan_for(node, phase);
      if (actions.empty()) {
        task.faulted.insert(node);
        journal_task_delta(task.id, "fault", node);
        continue;
      }
      DispatchedPlan plan;
      plan.entity = node;
      plan.actions = std::move(actions);
      plan.task = task.id;
      task.in_flight.insert(node);
      journal_task_delta(task.id, "admit", node);
      if (!dispatch(std::move(plan), dispatched).ok()) {
        task.in_flight.erase(node);
        task.faulted.insert(node);
        journal_task_delta(task.id, "fault", node);
      }
    }

    finish_task_if_done(task);
  }
}

RollingStatus Orchestrator::rolling_status(const std::string& task_id) const {
  RollingStatus status;
  status.task_id = task_id;
  auto it = tasks_.find(task_id);
  if (it == tasks_.end()) return status;
  const RollingTask& task = it->second;
  status.done = task.done;
  status.max_unavailable = task.spec.max_unavailable;
  status.completed.assign(task.completed.begin(), task.completed.end());
  status.faulted.assign(task.faulted.begin(), task.faulted.end());
  status.in_flight.assign(task.in_flight.begin(), task.in_flight.end());
  status.total_targets = task.spec.targets.size();
  return status;
}

bool Orchestrator::rolling_done(const std::string& task_id) const {
  auto it = tasks_.find(task_id);
  return it != tasks_.end() && it->second.done;
}

Result<SequenceReport> Orchestrator::run_sequence(const DependencyDag& dag, Direction direction,
                                                  VertexExecutor& executor) {
  if (!has_lease()) {
    return Error{Errc::LeaseLost, options_.principal + " no longer holds the lease"};
  }
  return orch::run_sequence(dag, direction, executor, options_.reconcile.readiness_retries);
}

Result<std::vector<state::StateRecord>> Orchestrator::remediate(const EmergencyEvent& event) {
  const std::string origin = "emergency:" + std::to_string(next_emergency_seq_++);
  std::vector<state::StateRecord> written;

  auto put = [&](const StateKey& key, Value value) -> Result<void> {
    auto r = store_.put_desire(key, std::move(value), origin);
    if (!r.ok()) return r.error();
    written.push_back(r.value());
    return {};
  };

  if (event.kind == "revoke_access") {
    if (auto r = put(StateKey{"cluster", "access", "deny:" + event.arg}, Value(true)); !r.ok()) {
      return r.error();
    }
  } else if (event.kind == "firewall_rule") {
    const StateKey key{"cluster", "firewall", "rules"};
    std::string rules;
    if (auto existing = store_.value_of(key, RecordKind::Desire); existing.has_value()) {
      rules = existing->to_string();
    }
    if (!rules.empty()) rules += ",";
    rules += "block:" + event.arg;
    if (auto r = put(key, Value(rules)); !r.ok()) return r.error();
  } else if (event.kind == "emergency_patch") {
    if (!event.image.has_value() || event.target.empty()) {
      return Error{Errc::ValidationError, "emergency_patch needs a target and an image"};
    }
    if (auto r = put(StateKey{"node", event.target, "image"}, Value(*event.image)); !r.ok()) {
      return r.error();
    }
  } else {
    return Error{Errc::UnknownEventKind, "unknown emergency kind '" + event.kind + "'"};
  }
  return written;
}

Result<void> Orchestrator::emergency_quarantine(const std::string& node_id) {
  const std::string origin = "emergency:" + std::to_string(next_emergency_seq_++);
  auto r = store_.put_desire(StateKey{"node", node_id, "phase"},
                             Value(std::string(model::to_string(NodePhase::Quarantined))),
                             origin);
  if (!r.ok()) return r.error();
  return {};
}

Result<uint64_t> Orchestrator::register_flow(const FlowDefinition& def) {
  if (flows_.count(def.name)) {
    return Error{Errc::DuplicateName, "flow '" + def.name + "' already registered"};
  }
  for (const auto& action : def.actions) {
    if (!graph_.has_action(action)) {
      return Error{Errc::ValidationError, "unknown action id '" + action + "'"};
    }
  }
  flows_[def.name] = def;
  (void)journal_append(json{{"t", "flow"},
                            {"name", def.name},
                            {"trigger_prop", def.trigger_prop},
                            {"trigger_equals", def.trigger_equals.to_string()},
                            {"actions", def.actions},
                            {"enabled", def.enabled}}
                           .dump());
  return next_flow_id_++;
}

Result<std::string> Orchestrator::resume(const Checkpoint& checkpoint) {
  if (!checkpoint.intact()) {
    if (!checkpoint.safe_to_repeat) {
      return Error{Errc::CheckpointInvalid,
                   "checkpoint for " + checkpoint.task_id + " is damaged (resume-only)"};
    }
    // Safe to repeat: restart from zero.
    RollingTask task;
    task.id = checkpoint.task_id;
    task.spec = checkpoint.spec;
    std::sort(task.spec.targets.begin(), task.spec.targets.end());
    tasks_[task.id] = std::move(task);
    declare_update_desires(tasks_[checkpoint.task_id]);
    journal_task_snapshot(tasks_[checkpoint.task_id]);
    return checkpoint.task_id;
  }
  RollingTask task;
  task.id = checkpoint.task_id;
  task.spec = checkpoint.spec;
  std::sort(task.spec.targets.begin(), task.spec.targets.end());
  task.cursor = checkpoint.cursor;
  task.completed.insert(checkpoint.completed.begin(), checkpoint.completed.end());
  task.faulted.insert(checkpoint.faulted.begin(), checkpoint.faulted.end());
  task.in_flight.insert(checkpoint.in_flight.begin(), checkpoint.in_flight.end());
  task.done = checkpoint.done;
  tasks_[task.id] = std::move(task);  // completed tasks stay done: no-op
  if (!checkpoint.done) declare_update_desires(tasks_[checkpoint.task_id]);
  return checkpoint.task_id;
}

Result<void> Orchestrator::recover() {
  auto records = journal_.read_all();
  if (!records.ok()) return records.error();
  for (const auto& payload : records.value()) {
    json j = json::parse(payload, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      return Error{Errc::CheckpointInvalid, "bad journal record"};
    }
    const std::string type = j.value("t", "");
    if (type == "ru_snap") {
      auto cp = Checkpoint::decode(payload);
      if (!cp.ok()) return cp.error();
      RollingTask task;
      task.id = cp.value().task_id;
      task.spec = cp.value().spec;
      task.cursor = cp.value().cursor;
      task.completed.insert(cp.value().completed.begin(), cp.value().completed.end());
      task.faulted.insert(cp.value().faulted.begin(), cp.value().faulted.end());
      task.in_flight.insert(cp.value().in_flight.begin(), cp.value().in_flight.end());
      task.done = cp.value().done;
      tasks_[task.id] = std::move(task);
      uint64_t seq = 0;
      if (task.id.size() > 3) {
        if (auto n = parse_u64(std::string_view(tasks_[task.id].id).substr(3)); n.ok()) {
          seq = n.value();
        }
      }
      next_task_seq_ = std::max(next_task_seq_, seq + 1);
    } else if (type == "ru_delta") {
      auto it = tasks_.find(j.value("task", ""));
      if (it == tasks_.end()) continue;
      RollingTask& task = it->second;
      const std::string node = j.value("node", "");
      const std::string event = j.value("event", "");
      if (event == "admit") {
        task.in_flight.insert(node);
      } else if (event == "complete") {
        task.in_flight.erase(node);
        task.completed.insert(node);
      } else if (event == "fault") {
        task.in_flight.erase(node);
        task.faulted.insert(node);
      }
    } else if (type == "flow") {
      FlowDefinition def;
      def.name = j.value("name", "");
      def.trigger_prop = j.value("trigger_prop", "");
      def.trigger_equals = Value::parse(j.value("trigger_equals", ""));
      def.actions = j.value("actions", std::vector<std::string>{});
      def.enabled = j.value("enabled", true);
      flows_[def.name] = std::move(def);
    }
    // "intent" records matter for audit and the at-most-once analysis; the
    // admit deltas already carry the in-flight sets used for resumption.
  }
  return {};
}

void Orchestrator::on_action_complete(const std::string& entity, const std::string& action,
                                      model::Outcome outcome, const std::string& task) {
  (void)entity;
  (void)action;
  (void)outcome;
  (void)task;
}

void Orchestrator::on_plan_done(const std::string& entity, bool success,
                                const std::string& task) {
  (void)success;
  if (task.empty() || starts_with(task, "flow:")) {
    reconcile_in_flight_.erase(entity);
    return;
  }
  auto it = tasks_.find(task);
  if (it == tasks_.end()) return;
  RollingTask& t = it->second;
  if (!t.in_flight.count(entity)) return;
  const NodePhase phase = phase_of(entity).value_or(NodePhase::Unknown);
  const auto image = image_fact_of(entity);
  if (image == t.spec.target && phase == NodePhase::ServicesReady) {
    t.in_flight.erase(entity);
    t.completed.insert(entity);
    journal_task_delta(t.id, "complete", entity);
  } else if (phase == NodePhase::Faulted || phase == NodePhase::Quarantined) {
    t.in_flight.erase(entity);
    t.faulted.insert(entity);
    journal_task_delta(t.id, "fault", entity);
  }
  // Other end states wait for the next pump's continuation plan.
  finish_task_if_done(t);
}

}  // namespace fleet::orch
