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

#include <memory>
#include <set>

#include "fleet/sim/scenario.hpp"
#include "fleet/state/store.hpp"

namespace fleet::sim {

enum class AddressMode { Location, Hardware };

struct TransferSpec {
  enum class Mode { Full, Lazy };
  Mode mode = Mode::Full;
  uint64_t cache_bytes = 64ull << 20;  // Lazy only
};

using BootParams = std::map<std::string, std::string>;

struct StageRecord {
  std::string stage;
  uint64_t start = 0;
  uint64_t end = 0;
  std::string outcome;  // "ok" or an error tag
};

/// Byte-accounted record of one simulated boot.
struct BootTrace {
  std::string node;
  std::vector<StageRecord> stages;
  uint64_t bytes_transferred = 0;
  std::string mode;
  BootParams params;
  bool initial_stage_resident = true;
  bool success = false;
};

struct AttestationReport {
  struct Layer {
    Digest expected;
    Digest measured;
  };
  std::string node;
  std::vector<Layer> layers;
  bool pass = false;
  std::optional<size_t> first_mismatch;
};

/// Deterministic simulated fleet: switches, nodes with out-of-band
/// controllers, staged boots with byte accounting, attestation, faults,
/// and (optionally) a live orchestrator reconciling the attached state
/// store. Single-threaded; one instance per scenario run.
class Simulation : public orch::ActionDispatcher {
 public:
  /// Validates the scenario (duplicate port wiring is rejected here),
  /// builds images, seeds facts and desires, and schedules faults.
  static Result<std::unique_ptr<Simulation>> create(Scenario scenario);

  ~Simulation() override;

  SimCore& core() { return core_; }
  NetworkModel& net() { return net_; }
  state::StateStore& store() { return *store_; }
  ImageRegistry& images() { return images_; }
  const model::MutationGraph& graph() const { return scenario_.graph; }
  orch::Orchestrator* orchestrator() { return orchestrator_.get(); }
  TraceLog& trace() { return core_.trace(); }
  uint64_t now() const { return core_.now(); }

  void run_until(uint64_t tick);
  void run_for(uint64_t ticks);
  uint64_t run_until_idle(uint64_t max_ticks);
  /// Runs until every node's phase fact equals `phase` or max_ticks pass;
  /// returns true on convergence.
  bool run_until_all_phase(model::NodePhase phase, uint64_t max_ticks);

  // --- provisioning surface -------------------------------------------------

  Result<model::TopologyLocation> discover_topology(const std::string& node_id);
  Result<Ipv6> assign_address(const std::string& node_id, AddressMode mode);
  Result<BootTrace> boot_node(const std::string& node_id, const ImageManifest& manifest,
                              TransferSpec transfer, BootParams params);
  Result<AttestationReport> attest_node(const std::string& node_id,
                                        const ImageManifest& expected);
  Result<void> stage_artifact_oob(const std::string& node_id, Digest artifact);
  Result<uint64_t> inject_fault(const FaultSpec& spec);

  /// The staging channel's credentials are invisible from inside the node:
  /// this always denies and leaves an audit event in the trace.
  Result<std::string> node_read_staging_credentials(const std::string& node_id);

  // --- orchestrator lifecycle (failure injection) ---------------------------

  void kill_orchestrator();
  Result<void> restart_orchestrator();
  bool orchestrator_alive() const { return orchestrator_ != nullptr; }

  // --- ActionDispatcher ------------------------------------------------------

  Result<void> dispatch_plan(const orch::DispatchedPlan& plan) override;
  bool has_pending(const std::string& entity) const override;
  Result<void> apply_cluster_value(const state::StateKey& key, const Value& value) override;

  // --- inspection ------------------------------------------------------------

  const model::NodeRecord* node(const std::string& id) const;
  std::vector<std::string> node_ids() const;
  uint64_t fleet_bytes_transferred() const { return fleet_bytes_; }
  const Scenario& scenario() const { return scenario_; }
  std::optional<model::NodePhase> phase_fact(const std::string& node_id) const;

  /// (phase, image-digest) per node; the post-run comparison key for
  /// resume-equivalence checks.
  std::map<std::string, std::pair<std::string, std::string>> final_state() const;

 private:
  struct SimNode {
    model::NodeRecord record;
    uint64_t memory = 0;
    bool bmc_up = true;
    std::optional<uint64_t> job_ticks;  // remaining; 0 = endless
    Rng rng{0};
    std::set<uint64_t> staged;                       // staged layer digests (oob)
    std::vector<AttestationReport::Layer> loaded;    // measured layers from last boot
    // lazy-transfer cache: (layer digest, offset) intervals in LRU order
    struct CacheSpan {
      uint64_t layer_digest;
      uint64_t offset;
      uint64_t length;
    };
    std::vector<CacheSpan> cache;
    uint64_t cache_used = 0;
    // in-flight plan
    std::vector<std::string> plan;
    size_t plan_next = 0;
    std::string plan_task;
    bool executing = false;
    uint64_t plan_generation = 0;  // cancels stale completions after crash
  };

  explicit Simulation(Scenario scenario);

  Result<void> init();
  SimNode* find_node(const std::string& id);
  const SimNode* find_node(const std::string& id) const;
  void write_fact(const std::string& owner, const state::StateKey& key, Value value);
  void set_phase(SimNode& node, model::NodePhase to, const std::string& cause,
                 const std::string& detail);
  void start_next_action(SimNode& node);
  void finish_action(SimNode& node, const model::MutationEdge& edge, bool ok,
                     uint64_t generation);
  uint64_t stage_ticks(SimNode& node, const std::string& stage);
  bool corrupt_active(const std::string& node_id, size_t layer) const;
  Result<uint64_t> run_boot_stages(SimNode& node, const ImageManifest& manifest,
                                   TransferSpec transfer, BootTrace* trace_out);
  uint64_t lazy_read(SimNode& node, const ImageLayer& layer, uint64_t offset, uint64_t len,
                     uint64_t cache_bytes);
  void apply_fault(const FaultSpec& spec);
  void schedule_reconcile_loop();

  Scenario scenario_;
  SimCore core_;
  NetworkModel net_;
  std::unique_ptr<state::StateStore> store_;
  ImageRegistry images_;
  std::unique_ptr<orch::Orchestrator> orchestrator_;
  orch::Orchestrator::Options orch_options_;

  std::map<std::string, SimNode> nodes_;
  std::map<uint32_t, SwitchDecl> switches_;
  std::map<uint32_t, uint64_t> lldp_off_until_;  // chassis -> until tick (UINT64_MAX = forever)
  std::set<std::pair<std::string, size_t>> corrupt_permanent_;
  std::map<std::pair<std::string, size_t>, uint64_t> corrupt_until_;
  std::set<std::string> pending_applies_;  // entities with an in-flight cluster apply
  uint64_t fleet_bytes_ = 0;
  uint64_t fault_seq_ = 1;
  std::filesystem::path journal_path_;
};

}  // namespace fleet::sim
