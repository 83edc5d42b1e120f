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

#include <gtest/gtest.h>

#include <filesystem>

#include <json.hpp>

#include "fleet/core/record_log.hpp"
#include "fleet/core/rng.hpp"
#include "fleet/state/store.hpp"

using namespace fleet;
using namespace fleet::state;

namespace {

StateStore make_store() {
  StateStore::Options opts;
  opts.store_id = "test-store";
  opts.namespaces = {"node", "svc", "cluster", "orch"};
  return StateStore(opts);
}

void claim(StateStore& store, const std::string& ns, const std::string& owner) {
  auto lease = store.transfer_ownership(KeyRange::ns(ns), std::nullopt, owner, 1);
  ASSERT_TRUE(lease.ok()) << lease.error().to_string();
}

}  // namespace

TEST(StateKey, OrderingAndParse) {
  StateKey a{"node", "n1", "image"};
  StateKey b{"node", "n1", "power"};
  StateKey c{"node", "n2", "image"};
  EXPECT_LT(a, b);
  EXPECT_LT(b, c);
  EXPECT_EQ(StateKey::parse("node/n1/power").value(), (StateKey{"node", "n1", "power"}));
  EXPECT_EQ(StateKey::parse("node//power").code(), Errc::MalformedKey);
  EXPECT_EQ(StateKey::parse("just-two/parts").code(), Errc::MalformedKey);
}

TEST(StateStore, PutFactHappyPath) {
  auto store = make_store();
  claim(store, "node", "provisioner");
  const StateKey key{"node", "n1", "power"};
  auto rec = store.put_fact("provisioner", key, Value("on"), 1);
  ASSERT_TRUE(rec.ok());
  EXPECT_EQ(rec.value().version, 1u);
  EXPECT_EQ(store.get(key, RecordKind::Fact).value().value.to_string(), "on");
}

TEST(StateStore, PutFactExclusivity) {
  auto store = make_store();
  claim(store, "node", "provisioner");
  auto rec = store.put_fact("srm", StateKey{"node", "n1", "power"}, Value("on"), 1);
  ASSERT_FALSE(rec.ok());
  EXPECT_EQ(rec.code(), Errc::NotOwner);
}

TEST(StateStore, PutFactStaleVersion) {
  auto store = make_store();
  claim(store, "node", "provisioner");
  const StateKey key{"node", "n1", "power"};
  ASSERT_TRUE(store.put_fact("provisioner", key, Value("on"), 1).ok());
  auto stale = store.put_fact("provisioner", key, Value("off"), 1);
  ASSERT_FALSE(stale.ok());
  EXPECT_EQ(stale.code(), Errc::StaleVersion);
  EXPECT_EQ(store.get(key, RecordKind::Fact).value().value.to_string(), "on");
}

TEST(StateStore, DesireReplaceAndArchive) {
  auto store = make_store();
  const StateKey key{"node", "n1", "image"};
  auto first = store.put_desire(key, Value(Digest::of("v1")), "r7");
  ASSERT_TRUE(first.ok());
  EXPECT_EQ(first.value().origin, "r7");
  auto second = store.put_desire(key, Value(Digest::of("v2")), "r8");
  ASSERT_TRUE(second.ok());
  EXPECT_EQ(store.get(key, RecordKind::Desire).value().origin, "r8");

  // Both desires appear in the audit log; the r7 record is archived there.
  size_t desire_entries = 0;
  for (const auto& e : store.audit_log()) {
    if (e.what == "desire") ++desire_entries;
  }
  EXPECT_EQ(desire_entries, 2u);
}

TEST(StateStore, DesireForUnknownEntityAccepted) {
  auto store = make_store();
  auto rec = store.put_desire(StateKey{"node", "not-yet-discovered", "image"},
                              Value(Digest::of("v1")), "r1");
  EXPECT_TRUE(rec.ok());
}

TEST(StateStore, DesireMalformedKeyRejected) {
  auto store = make_store();
  EXPECT_EQ(store.put_desire(StateKey{"node", "", "image"}, Value(1), "r1").code(),
            Errc::MalformedKey);
}

TEST(StateStore, GetModesAndErrors) {
  auto store = make_store();
  claim(store, "node", "provisioner");
  const StateKey power{"node", "n1", "power"};   // strong by policy
  const StateKey image{"node", "n1", "image"};   // eventual by policy
  ASSERT_TRUE(store.put_fact("provisioner", power, Value("off"), 1).ok());
  ASSERT_TRUE(store.put_fact("provisioner", image, Value(Digest::of("v1")), 1).ok());

  EXPECT_EQ(store.get(power, RecordKind::Fact, ReadMode::Strong).value().value.to_string(),
            "off");
  EXPECT_EQ(store.get(image, RecordKind::Fact, ReadMode::Strong).code(),
            Errc::ConsistencyMismatch);
  EXPECT_EQ(store.get(StateKey{"node", "nope", "power"}, RecordKind::Fact).code(),
            Errc::NotFound);
}

TEST(StateStore, DiffSemantics) {
  auto store = make_store();
  claim(store, "node", "provisioner");
  const Digest a = Digest::of("A"), b = Digest::of("B");

  // Converged key: no diff.
  ASSERT_TRUE(store.put_fact("provisioner", StateKey{"node", "n1", "image"}, Value(a), 1).ok());
  ASSERT_TRUE(store.put_desire(StateKey{"node", "n1", "image"}, Value(a), "r1").ok());
  EXPECT_TRUE(store.diff("n1").empty());

  // Fact != desire.
  ASSERT_TRUE(store.put_desire(StateKey{"node", "n1", "image"}, Value(b), "r2").ok());
  auto diff = store.diff("n1");
  ASSERT_EQ(diff.size(), 1u);
  EXPECT_EQ(diff[0].fact.value(), Value(a));
  EXPECT_EQ(diff[0].desire.value(), Value(b));

  // Absent fact is reported explicitly.
  ASSERT_TRUE(store.put_desire(StateKey{"node", "n2", "phase"}, Value("ServicesReady"), "r2").ok());
  auto diff2 = store.diff("n2");
  ASSERT_EQ(diff2.size(), 1u);
  EXPECT_FALSE(diff2[0].fact.has_value());
  EXPECT_EQ(diff2[0].desire.value(), Value("ServicesReady"));
}

TEST(StateStore, TransferOwnership) {
  auto store = make_store();
  const StateKey key{"node", "n1", "power"};
  claim(store, "node", "provisioner");
  ASSERT_TRUE(store.put_fact("provisioner", key, Value("on"), 1).ok());

  // Hand the whole node namespace to the srm at a later epoch.
  auto lease = store.transfer_ownership(KeyRange::ns("node"), "provisioner", "srm", 2);
  ASSERT_TRUE(lease.ok());
  EXPECT_EQ(lease.value().owner, "srm");
  EXPECT_EQ(lease.value().epoch, 2u);

  // The old owner is fenced out.
  auto put = store.put_fact("provisioner", key, Value("off"), 2);
  ASSERT_FALSE(put.ok());
  EXPECT_EQ(put.code(), Errc::NotOwner);
  EXPECT_TRUE(store.put_fact("srm", key, Value("off"), 1).ok());

  // Equal epoch is stale; wrong current owner is rejected.
  EXPECT_EQ(store.transfer_ownership(KeyRange::ns("node"), "srm", "other", 2).code(),
            Errc::EpochStale);
  EXPECT_EQ(store.transfer_ownership(KeyRange::ns("node"), "provisioner", "other", 3).code(),
            Errc::WrongCurrentOwner);
}

TEST(StateStore, TransferBootstrapClaim) {
  auto store = make_store();
  auto lease = store.transfer_ownership(KeyRange::ns("svc"), std::nullopt, "gateway", 1);
  ASSERT_TRUE(lease.ok());
  EXPECT_EQ(lease.value().epoch, 1u);
  // A second bootstrap claim on owned territory needs the current owner.
  EXPECT_EQ(store.transfer_ownership(KeyRange::ns("svc"), std::nullopt, "other", 2).code(),
            Errc::WrongCurrentOwner);
}

TEST(StateStore, SingleKeyLeaseTransfer) {
  // The "hand all power keys to the srm" flow: one single-key contiguous
  // range per node.
  auto store = make_store();
  claim(store, "node", "provisioner");
  const StateKey power{"node", "n1", "power"};
  auto narrowed =
      store.transfer_ownership(KeyRange::single(power), std::nullopt, "srm", 1);
  // The node namespace lease overlaps this range, so the transfer must
  // name the current owner...
  EXPECT_EQ(narrowed.code(), Errc::WrongCurrentOwner);

  // ...on a store without the broad lease it works.
  auto store2 = make_store();
  auto lease = store2.transfer_ownership(KeyRange::single(power), std::nullopt, "srm", 1);
  ASSERT_TRUE(lease.ok());
  EXPECT_TRUE(store2.put_fact("srm", power, Value("on"), 1).ok());
  EXPECT_EQ(store2.put_fact("srm", StateKey{"node", "n1", "phase"}, Value("x"), 1).code(),
            Errc::NotOwner);
}

TEST(StateStore, QueryReady) {
  auto store = make_store();
  claim(store, "node", "provisioner");
  ASSERT_TRUE(store
                  .put_fact("provisioner", StateKey{"node", "n1", "phase"},
                            Value("ServicesReady"), 1)
                  .ok());
  ASSERT_TRUE(
      store.put_fact("provisioner", StateKey{"node", "n1", "jobs"}, Value(int64_t{0}), 1).ok());

  StateStore::ReadyPredicate ready_for_reboot;
  ready_for_reboot.all_of = {
      {StateKey{"node", "n1", "phase"}, StateStore::ReadyCondition::Op::Eq,
       Value("ServicesReady")},
      {StateKey{"node", "n1", "jobs"}, StateStore::ReadyCondition::Op::Eq, Value(int64_t{0})},
  };
  auto answer = store.query_ready(ready_for_reboot);
  ASSERT_TRUE(answer.ok());
  EXPECT_TRUE(answer.value().ready);
  EXPECT_EQ(answer.value().versions.size(), 2u);

  ASSERT_TRUE(
      store.put_fact("provisioner", StateKey{"node", "n1", "jobs"}, Value(int64_t{1}), 2).ok());
  EXPECT_FALSE(store.query_ready(ready_for_reboot).value().ready);

  // A key from a disjoint store is not a coherent query.
  StateStore::ReadyPredicate cross;
  cross.all_of = {{StateKey{"foreign", "n1", "phase"}, StateStore::ReadyCondition::Op::Eq,
                   Value("ServicesReady")}};
  EXPECT_EQ(store.query_ready(cross).code(), Errc::CrossStoreQuery);
}

// Exclusivity property: replaying the audit log against the lease history,
// every accepted fact was written by the lease owner of its instant.
TEST(StateStore, ExclusivityReplayProperty) {
  auto store = make_store();
  claim(store, "node", "alpha");
  Rng rng(7);
  std::vector<std::string> owners{"alpha", "beta", "gamma"};
  std::string current = "alpha";
  uint64_t epoch = 1;
  for (int i = 0; i < 300; ++i) {
    if (rng.chance(0.1)) {
      const std::string next = owners[rng.below(owners.size())];
      if (next != current) {
        ASSERT_TRUE(store.transfer_ownership(KeyRange::ns("node"), current, next, ++epoch).ok());
        current = next;
      }
    }
    const std::string owner = owners[rng.below(owners.size())];
    const StateKey key{"node", "n" + std::to_string(rng.below(5)), "power"};
    const uint64_t version = store.latest_version(key, owner) + 1;
    auto put = store.put_fact(owner, key, Value(int64_t(i)), version);
    EXPECT_EQ(put.ok(), owner == current);
  }

  // Replay: walk the audit log tracking lease changes; each accepted fact
  // must match the owner in force at that point.
  std::string replay_owner;
  for (const auto& entry : store.audit_log()) {
    if (entry.what == "lease") {
      auto j = nlohmann::json::parse(entry.payload);
      replay_owner = j.value("to", "");
    } else if (entry.what == "fact") {
      auto rec = StateRecord::deserialize(entry.payload);
      ASSERT_TRUE(rec.ok());
      EXPECT_EQ(rec.value().owner, replay_owner);
    }
  }
}

// Per-owner version monotonicity over the audit log.
TEST(StateStore, VersionMonotonicityProperty) {
  auto store = make_store();
  claim(store, "node", "p");
  Rng rng(9);
  for (int i = 0; i < 200; ++i) {
    const StateKey key{"node", "n" + std::to_string(rng.below(3)), "power"};
    // Sometimes propose a stale or duplicate version on purpose.
    const uint64_t latest = store.latest_version(key, "p");
    const uint64_t version = rng.chance(0.3) ? rng.range(0, latest + 1) : latest + 1;
    (void)store.put_fact("p", key, Value(int64_t(i)), version);
  }
  std::map<std::pair<std::string, std::string>, uint64_t> last;  // (key, owner) -> version
  for (const auto& entry : store.audit_log()) {
    if (entry.what != "fact") continue;
    auto rec = StateRecord::deserialize(entry.payload);
    ASSERT_TRUE(rec.ok());
    auto& prev = last[{rec.value().key.to_string(), rec.value().owner}];
    EXPECT_GT(rec.value().version, prev);
    prev = rec.value().version;
  }
}

// Every accepted mutation appears exactly once in the audit log.
TEST(StateStore, AuditCompleteness) {
  auto store = make_store();
  claim(store, "node", "p");
  size_t accepted = 0;
  Rng rng(11);
  for (int i = 0; i < 100; ++i) {
    const StateKey key{"node", "n" + std::to_string(rng.below(4)), "image"};
    if (rng.chance(0.5)) {
      if (store
              .put_fact("p", key, Value(int64_t(i)),
                        store.latest_version(key, "p") + 1)
              .ok()) {
        ++accepted;
      }
    } else {
      if (store.put_desire(key, Value(int64_t(i)), "r" + std::to_string(i)).ok()) ++accepted;
    }
  }
  size_t mutations = 0;
  for (const auto& entry : store.audit_log()) {
    if (entry.what == "fact" || entry.what == "desire") ++mutations;
  }
  EXPECT_EQ(mutations, accepted);
}

TEST(StateStore, AuditPersistRoundTrip) {
  auto store = make_store();
  claim(store, "node", "p");
  ASSERT_TRUE(store.put_fact("p", StateKey{"node", "n1", "power"}, Value("on"), 1).ok());
  ASSERT_TRUE(store.put_desire(StateKey{"node", "n1", "image"}, Value(Digest::of("v")), "r1").ok());

  const auto path = std::filesystem::temp_directory_path() / "audit-test.log";
  std::filesystem::remove(path);
  ASSERT_TRUE(store.persist_audit(path).ok());
  RecordFile file(path);
  auto records = file.read_all();
  ASSERT_TRUE(records.ok());
  EXPECT_EQ(records.value().size(), store.audit_log().size());
  std::filesystem::remove(path);
}

TEST(ConsistencyPolicy, ClassifyAndParse) {
  auto policy = ConsistencyPolicy::defaults();
  EXPECT_EQ(policy.classify(StateKey{"node", "n1", "power"}), Consistency::Strong);
  EXPECT_EQ(policy.classify(StateKey{"node", "n1", "phase"}), Consistency::Strong);
  EXPECT_EQ(policy.classify(StateKey{"node", "n1", "image"}), Consistency::Eventual);
  EXPECT_EQ(policy.classify(StateKey{"cluster", "cluster", "config"}), Consistency::Eventual);

  auto parsed = ConsistencyPolicy::parse("strong ns=svc prop=endpoints\neventual ns=node prop=power\n");
  ASSERT_TRUE(parsed.ok());
  EXPECT_EQ(parsed.value().classify(StateKey{"svc", "c", "endpoints"}), Consistency::Strong);
  // The file rule overrides the built-in default for node power keys.
  EXPECT_EQ(parsed.value().classify(StateKey{"node", "n1", "power"}), Consistency::Eventual);
  EXPECT_FALSE(ConsistencyPolicy::parse("sometimes prop=x").ok());
}
