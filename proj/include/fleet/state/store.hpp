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
#include <shared_mutex>
#include <string>
#include <vector>

#include "fleet/core/result.hpp"
#include "fleet/state/lease.hpp"
#include "fleet/state/policy.hpp"
#include "fleet/state/record.hpp"

namespace fleet::state {

enum class ReadMode { Strong, Local };

/// Centralized store of facts and desires with per-key ownership leases,
/// per-writer version counters, per-key consistency classes, and an
/// append-only audit log.
///
/// All mutations serialize through one writer lock; reads take a shared
/// lock and never observe torn records. One process may host several
/// stores, but they manage disjoint namespaces and queries never span two
/// of them.
class StateStore {
 public:
  struct Options {
    std::string store_id = "store-0";
    /// Namespaces this store manages; empty means "all".
    std::set<std::string> namespaces;
    ConsistencyPolicy policy = ConsistencyPolicy::defaults();
  };

  StateStore() : StateStore(Options{}) {}
  explicit StateStore(Options opts);

  StateStore(const StateStore&) = delete;
  StateStore& operator=(const StateStore&) = delete;

  // --- mutations -----------------------------------------------------------

  /// Records an observed fact. The owner must hold the active lease for the
  /// key and the version must exceed the owner's last accepted version for
  /// it (callers normally pass latest+1).
  Result<StateRecord> put_fact(const std::string& owner, const StateKey& key, Value value,
                               uint64_t version);

  /// Records an intended state. Origin cites the configuration render (or
  /// emergency/operator event) that produced the desire; desires may name
  /// entities that have not been discovered yet.
  Result<StateRecord> put_desire(const StateKey& key, Value value, const std::string& origin);

  /// Retires a desire a later render no longer produces. Audited.
  Result<void> remove_desire(const StateKey& key, const std::string& origin);

  Result<OwnershipLease> transfer_ownership(const KeyRange& range,
                                            const std::optional<std::string>& from,
                                            const std::string& to, uint64_t epoch);

  // --- queries -------------------------------------------------------------

  /// Strong reads require the key's class to be Strong and reflect every
  /// committed write; Local reads return this replica's current view.
  Result<StateRecord> get(const StateKey& key, RecordKind kind,
                          ReadMode mode = ReadMode::Local) const;

  std::optional<Value> value_of(const StateKey& key, RecordKind kind) const;

  struct DiffEntry {
    StateKey key;
    std::optional<Value> fact;
    std::optional<Value> desire;
    std::string desire_origin;
  };

  /// Keys of one entity whose desire and fact disagree (absent facts are
  /// reported explicitly). Empty iff every desire has an equal fact.
  std::vector<DiffEntry> diff(const std::string& entity) const;

  /// Fleet-wide diff in key order; one ordered scan over both maps.
  std::vector<DiffEntry> diff_all() const;

  struct ReadyCondition {
    StateKey key;
    enum class Op { Eq, Ne, Absent } op = Op::Eq;
    Value expected;
  };
  struct ReadyPredicate {
    std::vector<ReadyCondition> all_of;
  };
  struct ReadyAnswer {
    bool ready = false;
    /// (key, version) consulted, so callers can detect staleness later.
    std::vector<std::pair<StateKey, uint64_t>> versions;
  };

  /// Evaluates a multi-key predicate over a single snapshot. Keys outside
  /// this store's managed namespaces are rejected as CrossStoreQuery.
  Result<ReadyAnswer> query_ready(const ReadyPredicate& predicate) const;

  std::optional<OwnershipLease> lease_for(const StateKey& key) const;
  std::vector<OwnershipLease> leases() const;
  uint64_t latest_version(const StateKey& key, const std::string& owner) const;

  // --- time ----------------------------------------------------------------

  /// Raises the logical-clock floor (the simulator passes its tick).
  void advance_time(uint64_t to);

  // --- audit ---------------------------------------------------------------

  struct AuditEntry {
    uint64_t seq = 0;
    std::string what;  // "fact" | "desire" | "desire_removed" | "lease" | "merge"
    std::string payload;
  };

  std::vector<AuditEntry> audit_log() const;
  Result<void> persist_audit(const std::filesystem::path& path) const;

  // --- replication surface ---------------------------------------------------

  /// Merges a record received from a peer replica (anti-entropy path).
  /// Only Eventual-class keys replicate this way. Returns the record now
  /// held locally for the key.
  Result<StateRecord> apply_replicated(const StateRecord& incoming);

  /// Every Eventual-class record (facts and desires), sorted by kind+key.
  std::vector<StateRecord> eventual_records() const;

  struct DigestEntry {
    repl::VersionVector vv;
    uint64_t content = 0;  // fnv of the serialized record
  };

  /// Deterministic per-key version summary of the eventual records.
  std::map<std::string, DigestEntry> gossip_digest() const;

  /// Byte-stable serialization of the eventual records; two replicas are
  /// convergent iff these strings are equal.
  std::string canonical_eventual_bytes() const;

  std::vector<StateRecord> snapshot(RecordKind kind) const;

  const std::string& id() const { return opts_.store_id; }
  bool manages(const std::string& ns) const;
  const ConsistencyPolicy& policy() const { return opts_.policy; }

 private:
  uint64_t next_timestamp_locked();
  void audit_locked(const std::string& what, std::string payload);
  const StateRecord* find_locked(const StateKey& key, RecordKind kind) const;

  Options opts_;
  mutable std::shared_mutex mu_;
  std::map<StateKey, StateRecord> facts_;
  std::map<StateKey, StateRecord> desires_;
  std::map<StateKey, OwnershipLease> leases_;  // keyed by range.lo; ranges disjoint
  std::vector<AuditEntry> audit_;
  uint64_t clock_ = 0;
  uint64_t clock_floor_ = 0;
  uint64_t audit_seq_ = 0;
};

/// Deterministic total order on records of one key: version-vector total,
/// then timestamp, then owner, then value bytes. Refines version-vector
/// dominance, so a strictly dominated record never wins.
int compare_for_merge(const StateRecord& a, const StateRecord& b);

}  // namespace fleet::state
