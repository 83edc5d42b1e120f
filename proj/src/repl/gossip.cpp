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

#include "fleet/repl/gossip.hpp"

namespace fleet::repl {

Result<state::StateRecord> merge(const state::StateRecord& a, const state::StateRecord& b) {
  if (a.key != b.key || a.kind != b.kind) {
    return Error{Errc::KeyMismatch, a.key.to_string() + " vs " + b.key.to_string()};
  }
  return state::compare_for_merge(a, b) >= 0 ? a : b;
}

Result<GossipStats> gossip_round(state::StateStore& local, state::StateStore& peer,
                                 const LinkGate& gate) {
  if (gate && !gate(local.id(), peer.id())) {
    return Error{Errc::RoundFailed, "peer " + peer.id() + " unreachable"};
  }

  GossipStats stats;
  const auto local_digest = local.gossip_digest();
  const auto peer_digest = peer.gossip_digest();

  // A record needs sending unless the receiver provably holds something at
  // least as new: a dominating or equal-and-identical copy. Concurrent
  // versions flow both ways and the deterministic merge settles them.
  auto needs_send = [](const state::StateRecord& rec,
                       const std::map<std::string, state::StateStore::DigestEntry>& digest) {
    const std::string tag =
        std::string(state::to_string(rec.kind)) + ":" + rec.key.to_string();
    auto it = digest.find(tag);
    if (it == digest.end()) return true;
    switch (rec.vv.compare(it->second.vv)) {
      case VersionVector::Order::Before:
        return false;
      case VersionVector::Order::Equal:
        return rec.fingerprint() != it->second.content;
      case VersionVector::Order::After:
      case VersionVector::Order::Concurrent:
        return true;
    }
    return true;
  };

  for (const auto& rec : local.eventual_records()) {
    if (!needs_send(rec, peer_digest)) continue;
    if (auto applied = peer.apply_replicated(rec); !applied.ok()) return applied.error();
    ++stats.sent_to_peer;
  }
  for (const auto& rec : peer.eventual_records()) {
    if (!needs_send(rec, local_digest)) continue;
    if (auto applied = local.apply_replicated(rec); !applied.ok()) return applied.error();
    ++stats.received_from_peer;
  }

  return stats;
}

}  // namespace fleet::repl
