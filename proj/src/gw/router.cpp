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

#include "fleet/gw/router.hpp"

#include <chrono>

namespace fleet::gw {

using nlohmann::json;
using state::RecordKind;
using state::StateKey;

namespace {

json record_to_json(const state::StateRecord& r) {
  return json{{"key", r.key.to_string()},
              {"kind", state::to_string(r.kind)},
              {"value", r.value.to_string()},
              {"version", r.version},
              {"owner", r.owner},
              {"origin", r.origin},
              {"timestamp", r.timestamp},
              {"consistency", state::to_string(r.consistency)}};
}

Result<StateKey> key_from(const json& args, const char* field = "key") {
  if (!args.contains(field)) return Error{Errc::ValidationError, "missing key"};
  return StateKey::parse(args.at(field).get<std::string>());
}

}  // namespace

Result<void> CommandRouter::require_orchestration_lease() const {
  if (deps_.orchestrator == nullptr || !deps_.orchestrator->has_lease()) {
    return Error{Errc::Unauthorized, "orchestration lease is not held"};
  }
  return {};
}

Result<json> CommandRouter::apply(const Command& command) {
  const auto started = std::chrono::steady_clock::now();
  auto result = dispatch(command);
  if (deps_.metrics != nullptr) {
    const double ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - started)
                          .count();
    (void)deps_.metrics->record(command.verb, ms,
                                result.ok() ? metrics::RequestOutcome::Success
                                            : metrics::RequestOutcome::Failure);
  }
  return result;
}

Result<json> CommandRouter::dispatch(const Command& command) {
  const json& args = command.args;
  state::StateStore* store = deps_.store;
  if (store == nullptr) return Error{Errc::Internal, "router has no store"};

  if (command.verb == "get") {
    auto key = key_from(args);
    if (!key.ok()) return Error{Errc::ValidationError, key.error().detail};
    const RecordKind kind =
        args.value("kind", "fact") == std::string("desire") ? RecordKind::Desire
                                                            : RecordKind::Fact;
    const state::ReadMode mode = args.value("mode", "local") == std::string("strong")
                                     ? state::ReadMode::Strong
                                     : state::ReadMode::Local;
    auto rec = store->get(key.value(), kind, mode);
    if (!rec.ok()) return rec.error();
    return record_to_json(rec.value());
  }

  if (command.verb == "put_desire") {
    auto key = key_from(args);
    if (!key.ok()) return Error{Errc::ValidationError, key.error().detail};
    if (!args.contains("value")) return Error{Errc::ValidationError, "missing value"};
    const std::string origin = args.value("origin", "operator:api");
    auto rec = store->put_desire(key.value(), Value::parse(args.at("value").get<std::string>()),
                                 origin);
    if (!rec.ok()) return rec.error();
    return record_to_json(rec.value());
  }

  if (command.verb == "diff") {
    if (!args.contains("entity")) return Error{Errc::ValidationError, "missing entity"};
    json out = json::array();
    for (const auto& d : store->diff(args.at("entity").get<std::string>())) {
      json entry{{"key", d.key.to_string()}};
      entry["fact"] = d.fact.has_value() ? json(d.fact->to_string()) : json();
      entry["desire"] = d.desire.has_value() ? json(d.desire->to_string()) : json();
      out.push_back(std::move(entry));
    }
    return out;
  }

  if (command.verb == "rollout") {
    const int64_t max_unavailable = args.value("max_unavailable", int64_t{0});
    if (max_unavailable < 1) {
      return Error{Errc::ValidationError, "max_unavailable must be >= 1"};
    }
    if (!args.contains("image")) return Error{Errc::ValidationError, "missing image"};
    if (auto lease = require_orchestration_lease(); !lease.ok()) return lease.error();

    orch::RollingUpdateSpec spec;
    spec.max_unavailable = static_cast<uint32_t>(max_unavailable);
    spec.image_id = args.at("image").get<std::string>();
    Digest digest;
    if (Digest::parse_hex(spec.image_id, digest)) {
      spec.target = digest;
    } else if (deps_.sim != nullptr) {
      auto resolved = deps_.sim->images().digest_of(spec.image_id);
      if (!resolved.has_value()) {
        return Error{Errc::ValidationError, "unknown image '" + spec.image_id + "'"};
      }
      spec.target = *resolved;
    } else {
      return Error{Errc::ValidationError, "image must be a digest"};
    }
    if (args.contains("targets")) {
      spec.targets = args.at("targets").get<std::vector<std::string>>();
    } else if (deps_.sim != nullptr) {
      spec.targets = deps_.sim->node_ids();
    }
    auto task = deps_.orchestrator->start_rolling_update(spec);
    if (!task.ok()) return task.error();
    return json{{"task", task.value()}};
  }

  if (command.verb == "rollout_status") {
    if (deps_.orchestrator == nullptr) return Error{Errc::Unauthorized, "no orchestrator"};
    auto status = deps_.orchestrator->rolling_status(args.value("task", ""));
    return json{{"task", status.task_id},
                {"done", status.done},
                {"completed", status.completed.size()},
                {"faulted", status.faulted},
                {"in_flight", status.in_flight.size()},
                {"targets", status.total_targets}};
  }

  if (command.verb == "sequence") {
    if (auto lease = require_orchestration_lease(); !lease.ok()) return lease.error();
    auto dag = orch::DependencyDag::parse(args.value("dag", ""));
    if (!dag.ok()) return Error{Errc::ValidationError, dag.error().detail};
    const orch::Direction direction = args.value("direction", "startup") == std::string("shutdown")
                                          ? orch::Direction::Shutdown
                                          : orch::Direction::Startup;

    // Service vertices are modeled through the enforcement plane: execute
    // writes the run-state fact, readiness reads it back.
    class StoreExecutor : public orch::VertexExecutor {
     public:
      StoreExecutor(state::StateStore& store, sim::Simulation* sim)
          : store_(store), sim_(sim) {}
      Result<void> execute(const std::string& vertex, orch::Direction dir) override {
        const StateKey key{"svc", vertex, "ready"};
        const Value value(dir == orch::Direction::Startup);
        if (sim_ != nullptr) {
          auto r = sim_->apply_cluster_value(key, value);
          sim_->run_for(2);
          return r;
        }
        auto put = store_.put_fact("cluster-agent", key, value,
                                   store_.latest_version(key, "cluster-agent") + 1);
        if (!put.ok()) return put.error();
        return {};
      }
      bool ready(const std::string& vertex, orch::Direction dir) override {
        auto v = store_.value_of(StateKey{"svc", vertex, "ready"}, RecordKind::Fact);
        const bool want = dir == orch::Direction::Startup;
        return v.has_value() && v->is_bool() && v->as_bool() == want;
      }

     private:
      state::StateStore& store_;
      sim::Simulation* sim_;
    } executor(*store, deps_.sim);

    auto report = deps_.orchestrator->run_sequence(dag.value(), direction, executor);
    if (!report.ok()) return report.error();
    json steps = json::array();
    for (const auto& step : report.value().steps) {
      const char* status = step.status == orch::SequenceReport::Status::Ok
                               ? "ok"
                               : step.status == orch::SequenceReport::Status::ReadinessFailed
                                     ? "readiness_failed"
                                     : "skipped";
      steps.push_back(json{{"vertex", step.vertex}, {"status", status}});
    }
    return json{{"success", report.value().success}, {"steps", std::move(steps)}};
  }

  if (command.verb == "remediate") {
    if (auto lease = require_orchestration_lease(); !lease.ok()) return lease.error();
    orch::EmergencyEvent event;
    event.kind = args.value("kind", "");
    event.arg = args.value("arg", "");
    event.target = args.value("target", "");
    if (args.contains("image")) {
      Digest digest;
      if (Digest::parse_hex(args.at("image").get<std::string>(), digest)) event.image = digest;
    }
    auto written = deps_.orchestrator->remediate(event);
    if (!written.ok()) return written.error();
    json out = json::array();
    for (const auto& rec : written.value()) out.push_back(record_to_json(rec));
    return out;
  }

  if (command.verb == "flows_add") {
    if (auto lease = require_orchestration_lease(); !lease.ok()) return lease.error();
    auto defs = orch::FlowDefinition::parse_file(args.value("definition", ""));
    if (!defs.ok()) return Error{Errc::ValidationError, defs.error().detail};
    json ids = json::array();
    for (const auto& def : defs.value()) {
      auto id = deps_.orchestrator->register_flow(def);
      if (!id.ok()) return id.error();
      ids.push_back(json{{"name", def.name}, {"id", id.value()}});
    }
    return ids;
  }

  if (command.verb == "metrics") {
    if (deps_.metrics == nullptr) return Error{Errc::Internal, "no metrics registry"};
    return json::parse(deps_.metrics->to_json());
  }

  if (command.verb == "attest") {
    if (deps_.sim == nullptr) return Error{Errc::ValidationError, "no simulation attached"};
    const std::string node = args.value("node", "");
    const sim::ImageManifest* manifest = nullptr;
    if (args.contains("image")) {
      manifest = deps_.sim->images().find(args.at("image").get<std::string>());
    } else {
      auto desired = store->value_of(StateKey{"node", node, "image"}, RecordKind::Desire);
      if (desired.has_value() && desired->is_digest()) {
        manifest = deps_.sim->images().find_by_digest(desired->as_digest());
      }
      if (manifest == nullptr) {
        const auto* rec = deps_.sim->node(node);
        if (rec != nullptr && rec->image.has_value()) {
          manifest = deps_.sim->images().find_by_digest(*rec->image);
        }
      }
    }
    if (manifest == nullptr) {
      return Error{Errc::ValidationError, "no expected image for node " + node};
    }
    auto report = deps_.sim->attest_node(node, *manifest);
    if (!report.ok()) return report.error();
    json layers = json::array();
    for (const auto& layer : report.value().layers) {
      layers.push_back(json{{"expected", layer.expected.hex()},
                            {"measured", layer.measured.hex()}});
    }
    json out{{"node", report.value().node},
             {"verdict", report.value().pass ? "pass" : "fail"},
             {"layers", std::move(layers)}};
    if (report.value().first_mismatch.has_value()) {
      out["first_mismatch"] = *report.value().first_mismatch;
    }
    return out;
  }

  if (command.verb == "sim_fault") {
    if (deps_.sim == nullptr) return Error{Errc::ValidationError, "no simulation attached"};
    sim::FaultSpec spec;
    const std::string kind = args.value("kind", "");
    if (kind == "crash") spec.kind = sim::FaultSpec::Kind::Crash;
    else if (kind == "partition") spec.kind = sim::FaultSpec::Kind::Partition;
    else if (kind == "slow_link") spec.kind = sim::FaultSpec::Kind::SlowLink;
    else if (kind == "corrupt_layer") spec.kind = sim::FaultSpec::Kind::CorruptLayer;
    else if (kind == "lldp_off") spec.kind = sim::FaultSpec::Kind::LldpOff;
    else return Error{Errc::ValidationError, "unknown fault kind '" + kind + "'"};
    spec.target = args.value("target", "");
    spec.layer = args.value("layer", size_t{0});
    spec.factor = args.value("factor", 2.0);
    spec.at = args.value("at", deps_.sim->now());
    spec.duration = args.value("duration", uint64_t{0});
    if (args.contains("groups")) {
      spec.groups = args.at("groups").get<std::vector<std::vector<std::string>>>();
    }
    auto id = deps_.sim->inject_fault(spec);
    if (!id.ok()) return id.error();
    return json{{"fault", id.value()}};
  }

  if (command.verb == "sim_run") {
    auto scenario = sim::Scenario::parse(args.value("scenario", ""));
    if (!scenario.ok()) return Error{Errc::ValidationError, scenario.error().detail};
    if (args.contains("seed")) scenario.value().seed = args.at("seed").get<uint64_t>();
    auto simulation = sim::Simulation::create(std::move(scenario).take());
    if (!simulation.ok()) return simulation.error();
    const uint64_t until = args.value("until", uint64_t{10000});
    simulation.value()->run_until_idle(until);
    json out{{"ticks", simulation.value()->now()},
             {"nodes", simulation.value()->node_ids().size()},
             {"bytes_transferred", simulation.value()->fleet_bytes_transferred()},
             {"trace_lines", simulation.value()->trace().lines().size()}};
    if (args.value("include_trace", false)) {
      out["trace"] = simulation.value()->trace().dump();
    }
    return out;
  }

  if (command.verb == "config_apply") {
    if (deps_.renderer == nullptr) return Error{Errc::ValidationError, "no renderer attached"};
    std::vector<cfg::ConfigLayer> stack;
    for (const auto& text : args.value("layers", std::vector<std::string>{})) {
      auto layer = cfg::ConfigLayer::parse(text);
      if (!layer.ok()) return Error{Errc::ValidationError, layer.error().detail};
      stack.push_back(std::move(layer).take());
    }
    auto effective = cfg::merge_layers(stack);
    if (!effective.ok()) return effective.error();
    auto rendered = deps_.renderer->render(effective.value());
    if (!rendered.ok()) return rendered.error();
    auto keys = [](const std::vector<StateKey>& v) {
      json out = json::array();
      for (const auto& k : v) out.push_back(k.to_string());
      return out;
    };
    return json{{"render_id", rendered.value().render_id},
                {"desires", rendered.value().desires.size()},
                {"added", keys(rendered.value().changes.added)},
                {"removed", keys(rendered.value().changes.removed)},
                {"modified", keys(rendered.value().changes.modified)}};
  }

  return Error{Errc::ValidationError, "unknown command '" + command.verb + "'"};
}

}  // namespace fleet::gw
