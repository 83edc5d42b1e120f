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

#include <functional>

#include "fleet/core/result.hpp"
#include "fleet/state/store.hpp"

namespace fleet::repl {

/// Deterministic merge of two records for the same key: the winner is the
/// maximum under a total order that refines version-vector dominance
/// (vector total, then timestamp, then owner id, then value bytes).
/// Commutative, associative, and idempotent by construction.
Result<state::StateRecord> merge(const state::StateRecord& a, const state::StateRecord& b);

struct GossipStats {
  size_t sent_to_peer = 0;
  size_t received_from_peer = 0;
  size_t deltas() const { return sent_to_peer + received_from_peer; }
};

/// Answers whether the link between two replicas is currently usable; the
/// simulator wires partition faults through this.
using LinkGate = std::function<bool(const std::string& a, const std::string& b)>;

/// One push-pull anti-entropy exchange between two replicas' eventual
/// stores. Both sides end up holding the merge of the exchanged records.
/// Idempotent: a second round with no intervening writes exchanges nothing.
/// When the gate reports the peer unreachable the round fails and neither
/// store changes.
Result<GossipStats> gossip_round(state::StateStore& local, state::StateStore& peer,
                                 const LinkGate& gate = {});

}  // namespace fleet::repl
