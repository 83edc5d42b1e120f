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

#include "fleet/sim/simulation.hpp"

#include <algorithm>

#include <json.hpp>

#include "fleet/core/strings.hpp"

namespace fleet::sim {

using nlohmann::json;
using model::NodePhase;
using state::RecordKind;
using state::StateKey;

namespace {
constexpr const char* kProvisioner = "provisioner";
constexpr const char* kClusterAgent = "cluster-agent";
constexpr uint64_t kTamper = 0x74616d706572ULL;  // flips measured digests
}  // namespace

Simulation::Simulation(Scenario scenario)
    : scenario_(std::move(scenario)),
      core_(scenario_.seed, scenario_.trace_level),
      net_(core_, scenario_.net_latency) {}

Simulation::~Simulation() = default;

Result<std::unique_ptr<Simulation>> Simulation::create(Scenario scenario) {
  std::unique_ptr<Simulation> sim(new Simulation(std::move(scenario)));
  if (auto r = sim->init(); !r.ok()) return r.error();
  return sim;
}

Result<void> Simulation::init() {
  state::StateStore::Options store_opts;
  store_opts.store_id = "cluster-store";
  store_opts.namespaces = {"node", "svc", "cluster", "orch"};
  store_ = std::make_unique<state::StateStore>(store_opts);

  for (const auto& sw : scenario_.switches) {
    if (!switches_.emplace(sw.chassis, sw).second) {
      return Error{Errc::ParseError, "duplicate switch chassis " +
                                         std::to_string(sw.chassis)};
    }
  }

  // Leases. The provisioner owns node facts, the enforcement agent owns
  // cluster and service facts; both are bootstrap claims.
  for (const auto& [range, owner] :
       std::vector<std::pair<state::KeyRange, std::string>>{
           {state::KeyRange::ns("node"), kProvisioner},
           {state::KeyRange::ns("cluster"), kClusterAgent},
           {state::KeyRange::ns("svc"), kClusterAgent}}) {
    auto lease = store_->transfer_ownership(range, std::nullopt, owner, 1);
    if (!lease.ok()) return lease.error();
  }

  for (const auto& recipe : scenario_.recipes) {
    auto manifests = build_images(BuildPolicy::Generalized, {}, recipe);
    if (!manifests.ok()) return manifests.error();
    for (auto& m : manifests.value()) images_.add(std::move(m));
  }

  std::set<model::TopologyLocation> used_ports;
  for (const auto& decl : scenario_.nodes) {
    if (!switches_.count(decl.location.chassis)) {
      return Error{Errc::UnknownSwitch,
                   decl.id + " is wired to undeclared chassis " +
                       std::to_string(decl.location.chassis)};
    }
    if (!used_ports.insert(decl.location).second) {
      return Error{Errc::DuplicateAttachment,
                   "two nodes wired to " + decl.location.to_string()};
    }
    if (nodes_.count(decl.id)) {
      return Error{Errc::ParseError, "duplicate node id " + decl.id};
    }
    SimNode node;
    node.record.id = decl.id;
    node.record.location = decl.location;
    node.record.nic = decl.nic;
    node.record.bmc_address = "bmc-" + decl.id;
    node.record.phase = decl.initial_phase;
    node.memory = decl.memory;
    node.job_ticks = decl.job_ticks;
    node.rng = core_.rng().fork(decl.id);
    if (decl.image.has_value()) {
      const ImageManifest* m = images_.find(*decl.image);
      if (m == nullptr) {
        return Error{Errc::UnknownImage, decl.id + " starts with unknown image " + *decl.image};
      }
      node.record.image = m->digest();
      // A node that starts booted has its layers loaded and clean.
      for (const auto& layer : m->layers) {
        node.loaded.push_back({layer.digest, layer.digest});
      }
    }
    nodes_.emplace(decl.id, std::move(node));
  }

  for (auto& [id, node] : nodes_) {
    write_fact(kProvisioner, StateKey{"node", id, "phase"},
               Value(std::string(model::to_string(node.record.phase))));
    if (node.record.image.has_value()) {
      write_fact(kProvisioner, StateKey{"node", id, "image"}, Value(*node.record.image));
    }
    if (node.record.phase == NodePhase::JobRunning) {
      write_fact(kProvisioner, StateKey{"node", id, "jobs"}, Value(int64_t{1}));
    }
  }

  for (const auto& desire : scenario_.desires) {
    auto resolve = [&](const Value& v) -> Value {
      if (desire.key.prop == "image" && v.is_string()) {
        if (auto digest = images_.digest_of(v.as_string())) return Value(*digest);
      }
      return v;
    };
    if (desire.key.entity == "*") {
      for (const auto& [id, node] : nodes_) {
        auto put = store_->put_desire(StateKey{desire.key.ns, id, desire.key.prop},
                                      resolve(desire.value), "scenario");
        if (!put.ok()) return put.error();
      }
    } else {
      auto put = store_->put_desire(desire.key, resolve(desire.value), "scenario");
      if (!put.ok()) return put.error();
    }
  }

  for (const auto& fault : scenario_.faults) {
    auto scheduled = inject_fault(fault);
    if (!scheduled.ok()) return scheduled.error();
  }

  if (scenario_.orchestrator_enabled) {
    journal_path_ = scenario_.journal_path.empty()
                        ? std::filesystem::temp_directory_path() /
                              ("fleetd-journal-" + std::to_string(scenario_.seed) + ".log")
                        : scenario_.journal_path;
    std::filesystem::remove(journal_path_);
    orch_options_.journal_path = journal_path_;
    orch_options_.reconcile = scenario_.reconcile;
    orchestrator_ = std::make_unique<orch::Orchestrator>(*store_, scenario_.graph, *this,
                                                         orch_options_);
    if (auto lease = orchestrator_->acquire_lease(1); !lease.ok()) return lease;
    schedule_reconcile_loop();
  }

  core_.trace().emit(0, "sim_start",
                     {{"nodes", nodes_.size()}, {"seed", scenario_.seed}});
  return {};
}

void Simulation::schedule_reconcile_loop() {
  core_.schedule(scenario_.reconcile.interval, [this] {
    if (orchestrator_ != nullptr) {
      store_->advance_time(core_.now());
      auto dispatched = orchestrator_->tick();
      if (!dispatched.ok()) {
        core_.trace().emit(core_.now(), "reconcile_error",
                           {{"error", dispatched.error().to_string()}});
      }
    }
    schedule_reconcile_loop();
  });
}

Simulation::SimNode* Simulation::find_node(const std::string& id) {
  auto it = nodes_.find(id);
  return it == nodes_.end() ? nullptr : &it->second;
}

const Simulation::SimNode* Simulation::find_node(const std::string& id) const {
  auto it = nodes_.find(id);
  return it == nodes_.end() ? nullptr : &it->second;
}

void Simulation::write_fact(const std::string& owner, const StateKey& key, Value value) {
  store_->advance_time(core_.now());
  const uint64_t version = store_->latest_version(key, owner) + 1;
  auto written = store_->put_fact(owner, key, std::move(value), version);
  if (!written.ok()) {
    core_.trace().emit(core_.now(), "fact_rejected",
                       {{"key", key.to_string()}, {"error", written.error().to_string()}});
  }
}

void Simulation::set_phase(SimNode& node, NodePhase to, const std::string& cause,
                           const std::string& detail) {
  if (node.record.phase == to) return;
  const NodePhase from = node.record.phase;
  node.record.phase = to;
  write_fact(kProvisioner, StateKey{"node", node.record.id, "phase"},
             Value(std::string(model::to_string(to))));
  core_.trace().emit(core_.now(), "phase_change",
                     {{"node", node.record.id},
                      {"from", model::to_string(from)},
                      {"to", model::to_string(to)},
                      {"cause", cause},
                      {"detail", detail}});
}

uint64_t Simulation::stage_ticks(SimNode& node, const std::string& stage) {
  StageTiming timing{2, 1};
  if (auto it = scenario_.stage_timing.find(stage); it != scenario_.stage_timing.end()) {
    timing = it->second;
  }
  uint64_t ticks = timing.base + (timing.jitter ? node.rng.below(timing.jitter + 1) : 0);
  return std::max<uint64_t>(1, ticks);
}

bool Simulation::corrupt_active(const std::string& node_id, size_t layer) const {
  if (corrupt_permanent_.count({node_id, layer})) return true;
  auto it = corrupt_until_.find({node_id, layer});
  return it != corrupt_until_.end() && core_.now() < it->second;
}

uint64_t Simulation::lazy_read(SimNode& node, const ImageLayer& layer, uint64_t offset,
                               uint64_t len, uint64_t cache_bytes) {
  if (node.staged.count(layer.digest.bits)) return 0;  // staged out of band
  const uint64_t end = std::min(offset + len, layer.size);
  if (end <= offset) return 0;

  // Merge the request with every overlapping or adjacent cached span of
  // this layer; spans stay disjoint, so the overlap sum is exact.
  uint64_t lo = offset, hi = end, overlap = 0;
  std::vector<SimNode::CacheSpan> kept;
  kept.reserve(node.cache.size());
  for (const auto& span : node.cache) {
    if (span.layer_digest == layer.digest.bits && span.offset <= hi &&
        span.offset + span.length >= lo) {
      const uint64_t o_lo = std::max(lo, span.offset);
      const uint64_t o_hi = std::min(hi, span.offset + span.length);
      if (o_hi > o_lo) overlap += o_hi - o_lo;
      lo = std::min(lo, span.offset);
      hi = std::max(hi, span.offset + span.length);
      node.cache_used -= span.length;
    } else {
      kept.push_back(span);
    }
  }
  node.cache = std::move(kept);
  node.cache.push_back({layer.digest.bits, lo, hi - lo});  // most recently used
  node.cache_used += hi - lo;
  while (node.cache_used > cache_bytes && node.cache.size() > 1) {
    node.cache_used -= node.cache.front().length;
    node.cache.erase(node.cache.begin());
  }

  const uint64_t missing = (end - offset) - overlap;
  return missing;
}

Result<uint64_t> Simulation::run_boot_stages(SimNode& node, const ImageManifest& manifest,
                                             TransferSpec transfer, BootTrace* trace_out) {
  const bool full = transfer.mode == TransferSpec::Mode::Full;
  if (full && manifest.total_bytes() > node.memory) {
    return Error{Errc::InsufficientMemory,
                 node.record.id + ": image needs " + std::to_string(manifest.total_bytes()) +
                     " bytes, node has " + std::to_string(node.memory)};
  }

  node.loaded.clear();
  uint64_t ticks = 0;
  uint64_t bytes = 0;
  auto stage = [&](const std::string& name, uint64_t duration, const std::string& outcome) {
    if (trace_out != nullptr) {
      trace_out->stages.push_back(
          {name, core_.now() + ticks, core_.now() + ticks + duration, outcome});
    }
    ticks += duration;
  };

  for (size_t i = 0; i < manifest.layers.size(); ++i) {
    const ImageLayer& layer = manifest.layers[i];
    const uint64_t duration = stage_ticks(node, "layer");
    const bool staged = node.staged.count(layer.digest.bits) != 0;
    uint64_t layer_bytes = 0;
    if (full) {
      layer_bytes = staged ? 0 : layer.size;
    } else {
      layer_bytes = staged ? 0 : scenario_.metadata_units_per_layer;
    }
    bytes += layer_bytes;
    core_.trace().emit(core_.now(), "transfer",
                       {{"node", node.record.id},
                        {"layer", i},
                        {"bytes", layer_bytes},
                        {"mode", full ? "full" : "lazy"},
                        {"staged", staged}});

    // The digest is verified before the layer executes.
    const Digest measured =
        corrupt_active(node.record.id, i) ? Digest{layer.digest.bits ^ kTamper} : layer.digest;
    node.loaded.push_back({layer.digest, measured});
    if (measured != layer.digest) {
      stage("layer:" + layer.name, duration, "digest_mismatch");
      fleet_bytes_ += bytes;
      if (trace_out != nullptr) trace_out->bytes_transferred += bytes;
      core_.trace().emit(core_.now(), "attest",
                         {{"node", node.record.id},
                          {"verdict", "fail"},
                          {"layer", i},
                          {"during", "boot"}});
      return Error{Errc::DigestMismatch, "layer " + std::to_string(i)};
    }
    stage("layer:" + layer.name, duration, "ok");
  }

  if (!full) {
    // The workload's reads are replayed against the layer cache.
    for (const auto& read : scenario_.reads) {
      if (read.node != node.record.id) continue;
      if (read.layer >= manifest.layers.size()) continue;
      bytes += lazy_read(node, manifest.layers[read.layer], read.offset, read.length,
                         transfer.cache_bytes);
    }
  }

  fleet_bytes_ += bytes;
  if (trace_out != nullptr) trace_out->bytes_transferred += bytes;
  return ticks;
}

// --- provisioning surface ----------------------------------------------------

Result<model::TopologyLocation> Simulation::discover_topology(const std::string& node_id) {
  SimNode* node = find_node(node_id);
  if (node == nullptr) return Error{Errc::UnknownNode, node_id};
  const auto& sw = switches_.at(node->record.location.chassis);
  bool lldp_ok = sw.lldp;
  if (auto it = lldp_off_until_.find(sw.chassis); it != lldp_off_until_.end()) {
    if (it->second == UINT64_MAX || core_.now() < it->second) lldp_ok = false;
  }
  if (!lldp_ok) {
    return Error{Errc::DiscoveryTimeout,
                 "switch " + std::to_string(sw.chassis) + " is not answering discovery"};
  }
  write_fact(kProvisioner, StateKey{"node", node_id, "location"},
             Value(node->record.location.to_string()));
  core_.trace().emit(core_.now(), "discovery",
                     {{"node", node_id},
                      {"chassis", node->record.location.chassis},
                      {"port", node->record.location.port}});
  if (node->record.phase == NodePhase::Unknown) {
    set_phase(*node, NodePhase::Discovered, "action", "discover");
  }
  return node->record.location;
}

Result<Ipv6> Simulation::assign_address(const std::string& node_id, AddressMode mode) {
  SimNode* node = find_node(node_id);
  if (node == nullptr) return Error{Errc::UnknownNode, node_id};
  if (!scenario_.router_enabled) {
    return Error{Errc::AddressTimeout, "no router advertisement source"};
  }
  Ipv6 addr = mode == AddressMode::Location
                  ? model::derive_identity(node->record.location, scenario_.site_prefix).address
                  : model::address_from_hardware(node->record.nic, scenario_.site_prefix);
  // Self-assigned: the router keeps no record of it.
  core_.trace().emit(core_.now(), "address",
                     {{"node", node_id},
                      {"mode", mode == AddressMode::Location ? "location" : "hardware"},
                      {"addr", addr.to_string()}});
  return addr;
}

Result<BootTrace> Simulation::boot_node(const std::string& node_id,
                                        const ImageManifest& manifest, TransferSpec transfer,
                                        BootParams params) {
  SimNode* node = find_node(node_id);
  if (node == nullptr) return Error{Errc::UnknownNode, node_id};
  if (node->record.phase != NodePhase::PoweredOn &&
      node->record.phase != NodePhase::NetBooting) {
    return Error{Errc::InvalidTransition,
                 node_id + " cannot boot from phase " +
                     model::to_string(node->record.phase)};
  }

  BootTrace trace;
  trace.node = node_id;
  trace.mode = transfer.mode == TransferSpec::Mode::Full ? "full" : "lazy";
  trace.params = params;
  trace.initial_stage_resident = true;  // the first stage is never abandoned

  uint64_t lead = 0;
  if (node->record.phase == NodePhase::PoweredOn) {
    const uint64_t firmware = stage_ticks(*node, "firmware");
    trace.stages.push_back({"firmware", core_.now(), core_.now() + firmware, "ok"});
    const uint64_t netboot = stage_ticks(*node, "netboot");
    trace.stages.push_back(
        {"netboot", core_.now() + firmware, core_.now() + firmware + netboot, "ok"});
    lead = firmware + netboot;
    core_.run_for(lead);
    set_phase(*node, NodePhase::NetBooting, "action", "net_boot");
  }

  core_.trace().emit(core_.now(), "boot_params",
                     {{"node", node_id}, {"params", params}});

  auto layer_ticks = run_boot_stages(*node, manifest, transfer, &trace);
  if (!layer_ticks.ok()) {
    core_.run_for(trace.stages.empty() ? 0 : trace.stages.back().end - core_.now());
    set_phase(*node, NodePhase::Faulted, "boot", "digest_mismatch");
    return layer_ticks.error();
  }
  core_.run_for(layer_ticks.value());
  node->record.image = manifest.digest();
  write_fact(kProvisioner, StateKey{"node", node_id, "image"}, Value(manifest.digest()));
  set_phase(*node, NodePhase::MinimalOs, "action", "load_minimal_os");
  trace.success = true;
  return trace;
}

Result<AttestationReport> Simulation::attest_node(const std::string& node_id,
                                                  const ImageManifest& expected) {
  SimNode* node = find_node(node_id);
  if (node == nullptr) return Error{Errc::UnknownNode, node_id};

  AttestationReport report;
  report.node = node_id;
  report.pass = true;
  for (size_t i = 0; i < expected.layers.size(); ++i) {
    AttestationReport::Layer layer;
    layer.expected = expected.layers[i].digest;
    layer.measured = i < node->loaded.size() ? node->loaded[i].measured : Digest{};
    report.layers.push_back(layer);
    if (layer.measured != layer.expected && !report.first_mismatch.has_value()) {
      report.pass = false;
      report.first_mismatch = i;
    }
  }
  if (node->loaded.size() > expected.layers.size() && report.pass) {
    report.pass = false;
    report.first_mismatch = expected.layers.size();
  }

  core_.trace().emit(core_.now(), "attest",
                     {{"node", node_id},
                      {"verdict", report.pass ? "pass" : "fail"},
                      {"layer", report.first_mismatch.value_or(0)}});

  if (!report.pass) {
    // Failed attestation drives the node to Quarantined through the
    // emergency path.
    if (orchestrator_ != nullptr) {
      (void)orchestrator_->emergency_quarantine(node_id);
    } else {
      (void)store_->put_desire(StateKey{"node", node_id, "phase"},
                               Value(std::string(model::to_string(NodePhase::Quarantined))),
                               "emergency:attest");
    }
  }
  return report;
}

Result<void> Simulation::stage_artifact_oob(const std::string& node_id, Digest artifact) {
  SimNode* node = find_node(node_id);
  if (node == nullptr) return Error{Errc::UnknownNode, node_id};
  if (!node->bmc_up) {
    return Error{Errc::BmcUnreachable, "bmc of " + node_id + " is down"};
  }
  node->staged.insert(artifact.bits);
  core_.trace().emit(core_.now(), "oob_staged",
                     {{"node", node_id}, {"artifact", artifact.hex()}});
  return {};
}

Result<std::string> Simulation::node_read_staging_credentials(const std::string& node_id) {
  core_.trace().emit(core_.now(), "oob_denied", {{"node", node_id}});
  return Error{Errc::Unauthorized,
               "staging credentials are not readable from node " + node_id};
}

Result<uint64_t> Simulation::inject_fault(const FaultSpec& spec) {
  // Validate referenced entities now; the effect fires at its tick.
  switch (spec.kind) {
    case FaultSpec::Kind::Crash:
    case FaultSpec::Kind::SlowLink:
    case FaultSpec::Kind::CorruptLayer: {
      std::string id = spec.target;
      if (starts_with(id, "bmc:")) id = id.substr(4);
      if (!nodes_.count(id)) return Error{Errc::UnknownNode, id};
      break;
    }
    case FaultSpec::Kind::Partition: {
      for (const auto& group : spec.groups) {
        for (const auto& member : group) {
          if (!nodes_.count(member)) return Error{Errc::UnknownNode, member};
        }
      }
      break;
    }
    case FaultSpec::Kind::LldpOff: {
      auto chassis = parse_u64(spec.target);
      if (!chassis.ok() || !switches_.count(static_cast<uint32_t>(chassis.value()))) {
        return Error{Errc::UnknownSwitch, spec.target};
      }
      break;
    }
  }

  const uint64_t id = fault_seq_++;
  const uint64_t delay = spec.at > core_.now() ? spec.at - core_.now() : 0;
  FaultSpec copy = spec;
  core_.schedule(delay, [this, copy] { apply_fault(copy); });
  return id;
}

void Simulation::apply_fault(const FaultSpec& spec) {
  core_.trace().emit(core_.now(), "fault_applied",
                     {{"kind", to_string(spec.kind)}, {"target", spec.target}});
  switch (spec.kind) {
    case FaultSpec::Kind::Crash: {
      if (starts_with(spec.target, "bmc:")) {
        SimNode* node = find_node(spec.target.substr(4));
        if (node == nullptr) return;
        node->bmc_up = false;
        if (spec.duration > 0) {
          const std::string id = node->record.id;
          core_.schedule(spec.duration, [this, id] {
            if (SimNode* n = find_node(id)) n->bmc_up = true;
            core_.trace().emit(core_.now(), "fault_cleared",
                               {{"kind", "crash"}, {"target", "bmc:" + id}});
          });
        }
        return;
      }
      SimNode* node = find_node(spec.target);
      if (node == nullptr) return;
      // Cancel whatever the node was doing; completions in flight become
      // stale via the generation counter.
      ++node->plan_generation;
      const std::string task = node->plan_task;
      const bool was_executing = node->executing;
      node->plan.clear();
      node->plan_next = 0;
      node->executing = false;
      set_phase(*node, NodePhase::Faulted, "fault", "crash");
      if (was_executing && orchestrator_ != nullptr) {
        orchestrator_->on_plan_done(node->record.id, false, task);
      }
      return;
    }
    case FaultSpec::Kind::Partition: {
      net_.partition(spec.groups, spec.duration);
      return;
    }
    case FaultSpec::Kind::SlowLink: {
      net_.set_slow(spec.target, spec.factor, spec.duration);
      return;
    }
    case FaultSpec::Kind::CorruptLayer: {
      if (spec.duration == 0) {
        corrupt_permanent_.insert({spec.target, spec.layer});
      } else {
        corrupt_until_[{spec.target, spec.layer}] = core_.now() + spec.duration;
      }
      return;
    }
    case FaultSpec::Kind::LldpOff: {
      const auto chassis = static_cast<uint32_t>(parse_u64(spec.target).value());
      lldp_off_until_[chassis] =
          spec.duration == 0 ? UINT64_MAX : core_.now() + spec.duration;
      return;
    }
  }
}

// --- orchestrator lifecycle ---------------------------------------------------

void Simulation::kill_orchestrator() {
  if (orchestrator_ == nullptr) return;
  orchestrator_.reset();
  core_.trace().emit(core_.now(), "orchestrator_killed", {});
}

Result<void> Simulation::restart_orchestrator() {
  if (orchestrator_ != nullptr) return {};
  orchestrator_ = std::make_unique<orch::Orchestrator>(*store_, scenario_.graph, *this,
                                                       orch_options_);
  if (auto recovered = orchestrator_->recover(); !recovered.ok()) return recovered;
  core_.trace().emit(core_.now(), "orchestrator_restarted", {});
  return {};
}

// --- ActionDispatcher ----------------------------------------------------------

Result<void> Simulation::dispatch_plan(const orch::DispatchedPlan& plan) {
  SimNode* node = find_node(plan.entity);
  if (node == nullptr) return Error{Errc::UnknownNode, plan.entity};
  if (node->executing) {
    return Error{Errc::Internal, plan.entity + " already has a plan in flight"};
  }
  node->plan = plan.actions;
  node->plan_next = 0;
  node->plan_task = plan.task;
  node->executing = true;
  ++node->plan_generation;
  core_.trace().emit(core_.now(), "plan_dispatch",
                     {{"node", plan.entity},
                      {"actions", plan.actions},
                      {"task", plan.task},
                      {"emergency", plan.emergency}});
  start_next_action(*node);
  return {};
}

bool Simulation::has_pending(const std::string& entity) const {
  const SimNode* node = find_node(entity);
  if (node != nullptr && node->executing) return true;
  return pending_applies_.count(entity) != 0;
}

Result<void> Simulation::apply_cluster_value(const StateKey& key, const Value& value) {
  // The enforcement plane acknowledges a desire by writing the matching
  // fact one tick later.
  pending_applies_.insert(key.entity);
  core_.schedule(1, [this, key, value] {
    pending_applies_.erase(key.entity);
    const std::string owner = key.ns == "node" ? kProvisioner : kClusterAgent;
    write_fact(owner, key, value);
    core_.trace().emit(core_.now(), "cluster_apply", {{"key", key.to_string()}});
  });
  return {};
}

void Simulation::start_next_action(SimNode& node) {
  if (!node.executing) return;
  if (node.plan_next >= node.plan.size()) {
    node.executing = false;
    const std::string task = node.plan_task;
    core_.trace().emit(core_.now(), "plan_done",
                       {{"node", node.record.id}, {"task", task}, {"ok", true}});
    if (orchestrator_ != nullptr) orchestrator_->on_plan_done(node.record.id, true, task);
    return;
  }

  const std::string action = node.plan[node.plan_next];
  const model::MutationEdge* edge = scenario_.graph.find(node.record.phase, action);
  if (edge == nullptr) {
    node.executing = false;
    const std::string task = node.plan_task;
    core_.trace().emit(core_.now(), "plan_done",
                       {{"node", node.record.id},
                        {"task", task},
                        {"ok", false},
                        {"reason", "no edge '" + action + "' from " +
                                       model::to_string(node.record.phase)}});
    if (orchestrator_ != nullptr) orchestrator_->on_plan_done(node.record.id, false, task);
    return;
  }

  core_.trace().emit(core_.now(), "action_exec",
                     {{"node", node.record.id},
                      {"action", action},
                      {"task", node.plan_task},
                      {"from", model::to_string(node.record.phase)}});

  bool ok = true;
  if (auto it = scenario_.action_failure_rate.find(action);
      it != scenario_.action_failure_rate.end()) {
    ok = !node.rng.chance(it->second);
  }

  uint64_t duration = edge->duration + (node.rng.below(2));

  if (action == "net_boot") {
    duration = stage_ticks(node, "firmware") + stage_ticks(node, "netboot");
  } else if (action == "start_services") {
    duration = stage_ticks(node, "services");
  } else if (action == "complete_drain") {
    const uint64_t remaining =
        node.job_ticks.has_value() && *node.job_ticks > 0 ? *node.job_ticks : UINT64_MAX;
    duration = std::min(remaining, scenario_.reconcile.drain_timeout);
  } else if (action == "load_minimal_os" && ok) {
    // Resolve the image this boot should load: the node's image desire,
    // falling back to its current image, then the registry's single image.
    const ImageManifest* manifest = nullptr;
    if (auto desired = store_->value_of(StateKey{"node", node.record.id, "image"},
                                        RecordKind::Desire);
        desired.has_value() && desired->is_digest()) {
      manifest = images_.find_by_digest(desired->as_digest());
    }
    if (manifest == nullptr && node.record.image.has_value()) {
      manifest = images_.find_by_digest(*node.record.image);
    }
    if (manifest == nullptr && images_.ids().size() == 1) {
      manifest = images_.find(images_.ids().front());
    }
    if (manifest == nullptr) {
      ok = false;
      duration = 1;
    } else {
      TransferSpec transfer;
      transfer.mode = scenario_.lazy_transfer ? TransferSpec::Mode::Lazy
                                              : TransferSpec::Mode::Full;
      transfer.cache_bytes = scenario_.lazy_cache_bytes;
      auto boot = run_boot_stages(node, *manifest, transfer, nullptr);
      if (boot.ok()) {
        duration = std::max<uint64_t>(1, boot.value());
        const Digest digest = manifest->digest();
        const uint64_t generation = node.plan_generation;
        const std::string id = node.record.id;
        core_.schedule(duration - 1 > 0 ? duration - 1 : 0, [this, id, digest, generation] {
          SimNode* n = find_node(id);
          if (n == nullptr || n->plan_generation != generation) return;
          n->record.image = digest;
          write_fact(kProvisioner, StateKey{"node", id, "image"}, Value(digest));
        });
      } else {
        ok = false;
        duration = std::max<uint64_t>(1, stage_ticks(node, "layer"));
      }
    }
  }

  const uint64_t generation = node.plan_generation;
  const std::string id = node.record.id;
  const model::MutationEdge edge_copy = *edge;
  core_.schedule(std::max<uint64_t>(1, duration), [this, id, edge_copy, ok, generation] {
    SimNode* n = find_node(id);
    if (n == nullptr) return;
    finish_action(*n, edge_copy, ok, generation);
  });
}

void Simulation::finish_action(SimNode& node, const model::MutationEdge& edge, bool ok,
                               uint64_t generation) {
  if (generation != node.plan_generation || !node.executing) return;

  auto applied = model::apply_transition(node.record, edge, ok ? model::Outcome::Success
                                                               : model::Outcome::Failure);
  if (!applied.ok()) {
    node.executing = false;
    if (orchestrator_ != nullptr) {
      orchestrator_->on_plan_done(node.record.id, false, node.plan_task);
    }
    return;
  }
  const NodePhase from = node.record.phase;
  node.record.phase = applied.value().phase;
  write_fact(kProvisioner, StateKey{"node", node.record.id, "phase"},
             Value(std::string(model::to_string(node.record.phase))));
  core_.trace().emit(core_.now(), "phase_change",
                     {{"node", node.record.id},
                      {"from", model::to_string(from)},
                      {"to", model::to_string(node.record.phase)},
                      {"cause", "action"},
                      {"detail", edge.action},
                      {"outcome", ok ? "success" : "failure"},
                      {"task", node.plan_task}});

  if (ok) {
    if (edge.action == "complete_drain" || edge.action == "drain") {
      if (edge.action == "complete_drain") {
        node.job_ticks.reset();
        write_fact(kProvisioner, StateKey{"node", node.record.id, "jobs"}, Value(int64_t{0}));
      }
    } else if (edge.action == "start_job") {
      write_fact(kProvisioner, StateKey{"node", node.record.id, "jobs"}, Value(int64_t{1}));
      if (!node.job_ticks.has_value()) node.job_ticks = 0;
    } else if (edge.action == "power_on") {
      write_fact(kProvisioner, StateKey{"node", node.record.id, "power"}, Value("on"));
    } else if (edge.action == "power_off" || edge.action == "power_cycle" ||
               edge.action == "ensure_off") {
      write_fact(kProvisioner, StateKey{"node", node.record.id, "power"}, Value("off"));
    } else if (edge.action == "discover") {
      write_fact(kProvisioner, StateKey{"node", node.record.id, "location"},
                 Value(node.record.location.to_string()));
    }
  }

  if (orchestrator_ != nullptr) {
    orchestrator_->on_action_complete(node.record.id, edge.action,
                                      ok ? model::Outcome::Success : model::Outcome::Failure,
                                      node.plan_task);
  }

  if (!ok) {
    node.executing = false;
    const std::string task = node.plan_task;
    core_.trace().emit(core_.now(), "plan_done",
                       {{"node", node.record.id}, {"task", task}, {"ok", false},
                        {"reason", "action '" + edge.action + "' failed"}});
    if (orchestrator_ != nullptr) orchestrator_->on_plan_done(node.record.id, false, task);
    return;
  }

  ++node.plan_next;
  start_next_action(node);
}

// --- run helpers ----------------------------------------------------------------

void Simulation::run_until(uint64_t tick) { core_.run_until(tick); }
void Simulation::run_for(uint64_t ticks) { core_.run_for(ticks); }
uint64_t Simulation::run_until_idle(uint64_t max_ticks) { return core_.run_until_idle(max_ticks); }

bool Simulation::run_until_all_phase(NodePhase phase, uint64_t max_ticks) {
  const uint64_t deadline = core_.now() + max_ticks;
  const uint64_t stride = std::max<uint64_t>(1, scenario_.reconcile.interval);
  while (core_.now() < deadline) {
    bool all = true;
    for (const auto& [id, node] : nodes_) {
      if (node.record.phase != phase) {
        all = false;
        break;
      }
    }
    if (all) return true;
    core_.run_for(stride);
  }
  return false;
}

// --- inspection ------------------------------------------------------------------

const model::NodeRecord* Simulation::node(const std::string& id) const {
  const SimNode* node = find_node(id);
  return node == nullptr ? nullptr : &node->record;
}

std::vector<std::string> Simulation::node_ids() const {
  std::vector<std::string> out;
  out.reserve(nodes_.size());
  for (const auto& [id, node] : nodes_) out.push_back(id);
  return out;
}

std::optional<NodePhase> Simulation::phase_fact(const std::string& node_id) const {
  auto v = store_->value_of(StateKey{"node", node_id, "phase"}, RecordKind::Fact);
  if (!v.has_value()) return std::nullopt;
  return model::phase_from_string(v->to_string());
}

std::map<std::string, std::pair<std::string, std::string>> Simulation::final_state() const {
  std::map<std::string, std::pair<std::string, std::string>> out;
  for (const auto& [id, node] : nodes_) {
    std::string phase = model::to_string(node.record.phase);
    std::string image = node.record.image.has_value() ? node.record.image->hex() : "";
    out[id] = {std::move(phase), std::move(image)};
  }
  return out;
}

}  // namespace fleet::sim
