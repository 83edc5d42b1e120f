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

#include "fleet/state/store.hpp"

#include <mutex>

#include <json.hpp>

#include "fleet/core/record_log.hpp"

namespace fleet::state {

using nlohmann::json;

StateStore::StateStore(Options opts) : opts_(std::move(opts)) {}

bool StateStore::manages(const std::string& ns) const {
  return opts_.namespaces.empty() || opts_.namespaces.count(ns) != 0;
}

uint64_t StateStore::next_timestamp_locked() {
  clock_ = std::max(clock_ + 1, clock_floor_);
  return clock_;
}

void StateStore::advance_time(uint64_t to) {
  std::unique_lock lock(mu_);
  clock_floor_ = std::max(clock_floor_, to);
}

void StateStore::audit_locked(const std::string& what, std::string payload) {
  audit_.push_back(AuditEntry{++audit_seq_, what, std::move(payload)});
}

const StateRecord* StateStore::find_locked(const StateKey& key, RecordKind kind) const {
  const auto& map = kind == RecordKind::Fact ? facts_ : desires_;
  auto it = map.find(key);
  return it == map.end() ? nullptr : &it->second;
}

Result<StateRecord> StateStore::put_fact(const std::string& owner, const StateKey& key,
                                         Value value, uint64_t version) {
  if (!key.valid()) return Error{Errc::MalformedKey, key.to_string()};
  std::unique_lock lock(mu_);

  const OwnershipLease* lease = nullptr;
  if (auto it = leases_.upper_bound(key); it != leases_.begin()) {
    --it;
    if (it->second.range.contains(key)) lease = &it->second;
  }
  if (lease == nullptr || lease->owner != owner) {
    return Error{Errc::NotOwner,
                 owner + " does not hold the lease for " + key.to_string()};
  }

  StateRecord record;
  const StateRecord* prev = find_locked(key, RecordKind::Fact);
  const uint64_t latest = prev ? prev->vv.get(owner) : 0;
  if (version <= latest) {
    return Error{Errc::StaleVersion, "version " + std::to_string(version) + " <= latest " +
                                         std::to_string(latest) + " for " + owner};
  }
  if (prev != nullptr) record.vv = prev->vv;
  record.key = key;
  record.kind = RecordKind::Fact;
  record.value = std::move(value);
  record.version = version;
  record.vv.set(owner, version);
  record.owner = owner;
  record.timestamp = next_timestamp_locked();
  record.consistency = opts_.policy.classify(key);

  facts_[key] = record;
  audit_locked("fact", record.serialize());
  return record;
}

Result<StateRecord> StateStore::put_desire(const StateKey& key, Value value,
                                           const std::string& origin) {
  if (!key.valid()) return Error{Errc::MalformedKey, key.to_string()};
  std::unique_lock lock(mu_);

  StateRecord record;
  record.key = key;
  record.kind = RecordKind::Desire;
  record.value = std::move(value);
  if (const StateRecord* prev = find_locked(key, RecordKind::Desire)) {
    record.vv = prev->vv;
  }
  record.version = record.vv.bump(origin.empty() ? "?" : origin);
  record.owner = origin;
  record.origin = origin;
  record.timestamp = next_timestamp_locked();
  record.consistency = opts_.policy.classify(key);

  desires_[key] = record;
  audit_locked("desire", record.serialize());
  return record;
}

Result<void> StateStore::remove_desire(const StateKey& key, const std::string& origin) {
  std::unique_lock lock(mu_);
  auto it = desires_.find(key);
  if (it == desires_.end()) return Error{Errc::NotFound, key.to_string()};
  audit_locked("desire_removed",
               json{{"key", key.to_string()}, {"origin", origin}}.dump());
  desires_.erase(it);
  return {};
}

Result<OwnershipLease> StateStore::transfer_ownership(const KeyRange& range,
                                                      const std::optional<std::string>& from,
                                                      const std::string& to, uint64_t epoch) {
  std::unique_lock lock(mu_);

  // Locate leases overlapping the requested range. A transfer either
  // replaces one lease with the identical range or claims virgin territory.
  const OwnershipLease* current = nullptr;
  for (const auto& [lo, lease] : leases_) {
    if (!lease.range.overlaps(range)) continue;
    if (lease.range == range) {
      current = &lease;
      continue;
    }
    return Error{Errc::WrongCurrentOwner,
                 "range " + range.to_string() + " partially overlaps lease " +
                     lease.range.to_string()};
  }

  if (current != nullptr) {
    if (epoch <= current->epoch) {
      return Error{Errc::EpochStale, "epoch " + std::to_string(epoch) +
                                         " <= current " + std::to_string(current->epoch)};
    }
    if (!from.has_value() || *from != current->owner) {
      return Error{Errc::WrongCurrentOwner,
                   "current owner is " + current->owner};
    }
  } else {
    if (from.has_value()) {
      return Error{Errc::WrongCurrentOwner, "range is unowned; bootstrap claims pass no from"};
    }
    if (epoch == 0) {
      return Error{Errc::EpochStale, "epoch must be >= 1"};
    }
  }

  OwnershipLease lease{range, to, epoch};
  leases_[range.lo] = lease;
  audit_locked("lease", json{{"range", range.to_string()},
                             {"from", from.value_or("")},
                             {"to", to},
                             {"epoch", epoch}}
                            .dump());
  return lease;
}

Result<StateRecord> StateStore::get(const StateKey& key, RecordKind kind,
                                    ReadMode mode) const {
  std::shared_lock lock(mu_);
  if (mode == ReadMode::Strong &&
      opts_.policy.classify(key) != Consistency::Strong) {
    return Error{Errc::ConsistencyMismatch,
                 "strong read of eventual key " + key.to_string()};
  }
  const StateRecord* rec = find_locked(key, kind);
  if (rec == nullptr) return Error{Errc::NotFound, key.to_string()};
  return *rec;
}

std::optional<Value> StateStore::value_of(const StateKey& key, RecordKind kind) const {
  std::shared_lock lock(mu_);
  const StateRecord* rec = find_locked(key, kind);
  if (rec == nullptr) return std::nullopt;
  return rec->value;
}

std::vector<StateStore::DiffEntry> StateStore::diff(const std::string& entity) const {
  std::shared_lock lock(mu_);
  std::vector<DiffEntry> out;
  for (const auto& [key, desire] : desires_) {
    if (key.entity != entity) continue;
    auto it = facts_.find(key);
    if (it != facts_.end() && it->second.value == desire.value) continue;
    DiffEntry e;
    e.key = key;
    if (it != facts_.end()) e.fact = it->second.value;
    e.desire = desire.value;
    e.desire_origin = desire.origin;
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<StateStore::DiffEntry> StateStore::diff_all() const {
  std::shared_lock lock(mu_);
  std::vector<DiffEntry> out;
  auto fit = facts_.begin();
  for (const auto& [key, desire] : desires_) {
    while (fit != facts_.end() && fit->first < key) ++fit;
    const bool have_fact = fit != facts_.end() && fit->first == key;
    if (have_fact && fit->second.value == desire.value) continue;
    DiffEntry e;
    e.key = key;
    if (have_fact) e.fact = fit->second.value;
    e.desire = desire.value;
    e.desire_origin = desire.origin;
    out.push_back(std::move(e));
  }
  return out;
}

Result<StateStore::ReadyAnswer> StateStore::query_ready(const ReadyPredicate& predicate) const {
  std::shared_lock lock(mu_);
  ReadyAnswer answer;
  answer.ready = true;
  for (const auto& cond : predicate.all_of) {
    if (!manages(cond.key.ns)) {
      return Error{Errc::CrossStoreQuery,
                   "key " + cond.key.to_string() + " is not managed by store " +
                       opts_.store_id};
    }
    const StateRecord* rec = find_locked(cond.key, RecordKind::Fact);
    answer.versions.emplace_back(cond.key, rec ? rec->version : 0);
    switch (cond.op) {
      case ReadyCondition::Op::Eq:
        if (rec == nullptr || !(rec->value == cond.expected)) answer.ready = false;
        break;
      case ReadyCondition::Op::Ne:
        if (rec == nullptr || rec->value == cond.expected) answer.ready = false;
        break;
      case ReadyCondition::Op::Absent:
        if (rec != nullptr) answer.ready = false;
        break;
    }
  }
  return answer;
}

std::optional<OwnershipLease> StateStore::lease_for(const StateKey& key) const {
  std::shared_lock lock(mu_);
  if (auto it = leases_.upper_bound(key); it != leases_.begin()) {
    --it;
    if (it->second.range.contains(key)) return it->second;
  }
  return std::nullopt;
}

std::vector<OwnershipLease> StateStore::leases() const {
  std::shared_lock lock(mu_);
  std::vector<OwnershipLease> out;
  out.reserve(leases_.size());
  for (const auto& [lo, lease] : leases_) out.push_back(lease);
  return out;
}

uint64_t StateStore::latest_version(const StateKey& key, const std::string& owner) const {
  std::shared_lock lock(mu_);
  const StateRecord* rec = find_locked(key, RecordKind::Fact);
  return rec ? rec->vv.get(owner) : 0;
}

std::vector<StateStore::AuditEntry> StateStore::audit_log() const {
  std::shared_lock lock(mu_);
  return audit_;
}

Result<void> StateStore::persist_audit(const std::filesystem::path& path) const {
  auto entries = audit_log();
  RecordFile file(path);
  if (auto r = file.truncate(); !r.ok()) return r;
  for (const auto& e : entries) {
    json j{{"seq", e.seq}, {"what", e.what}, {"payload", e.payload}};
    if (auto r = file.append(j.dump()); !r.ok()) return r;
  }
  return {};
}

int compare_for_merge(const StateRecord& a, const StateRecord& b) {
  const uint64_t ta = a.vv.total(), tb = b.vv.total();
  if (ta != tb) return ta < tb ? -1 : 1;
  if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp ? -1 : 1;
  if (a.owner != b.owner) return a.owner < b.owner ? -1 : 1;
  const std::string va = a.value.to_string(), vb = b.value.to_string();
  if (va != vb) return va < vb ? -1 : 1;
  // Full-content tie-break keeps the order total even for records that agree
  // on every ranked field; replicas must never hold distinct "equal" records.
  const std::string sa = a.serialize(), sb = b.serialize();
  if (sa != sb) return sa < sb ? -1 : 1;
  return 0;
}

Result<StateRecord> StateStore::apply_replicated(const StateRecord& incoming) {
  std::unique_lock lock(mu_);
  if (opts_.policy.classify(incoming.key) != Consistency::Eventual) {
    return Error{Errc::ConsistencyMismatch,
                 "strong key " + incoming.key.to_string() + " cannot gossip"};
  }
  auto& map = incoming.kind == RecordKind::Fact ? facts_ : desires_;
  auto it = map.find(incoming.key);
  if (it == map.end()) {
    map[incoming.key] = incoming;
    audit_locked("merge", incoming.serialize());
    return incoming;
  }
  if (compare_for_merge(incoming, it->second) > 0) {
    it->second = incoming;
    audit_locked("merge", incoming.serialize());
  }
  return it->second;
}

std::vector<StateRecord> StateStore::eventual_records() const {
  std::shared_lock lock(mu_);
  std::vector<StateRecord> out;
  for (const auto* map : {&facts_, &desires_}) {
    for (const auto& [key, rec] : *map) {
      if (rec.consistency == Consistency::Eventual) out.push_back(rec);
    }
  }
  return out;
}

std::map<std::string, StateStore::DigestEntry> StateStore::gossip_digest() const {
  std::map<std::string, DigestEntry> out;
  for (const auto& rec : eventual_records()) {
    out[std::string(to_string(rec.kind)) + ":" + rec.key.to_string()] =
        DigestEntry{rec.vv, rec.fingerprint()};
  }
  return out;
}

std::string StateStore::canonical_eventual_bytes() const {
  std::string out;
  for (const auto& rec : eventual_records()) {
    out += rec.serialize();
    out += '\n';
  }
  return out;
}

std::vector<StateRecord> StateStore::snapshot(RecordKind kind) const {
  std::shared_lock lock(mu_);
  const auto& map = kind == RecordKind::Fact ? facts_ : desires_;
  std::vector<StateRecord> out;
  out.reserve(map.size());
  for (const auto& [key, rec] : map) out.push_back(rec);
  return out;
}

}  // namespace fleet::state
