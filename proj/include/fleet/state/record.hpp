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

#include <cstdint>
#include <string>

#include "fleet/core/value.hpp"
#include "fleet/repl/version_vector.hpp"
#include "fleet/state/key.hpp"

namespace fleet::state {

enum class RecordKind { Fact, Desire };
enum class Consistency { Strong, Eventual };

const char* to_string(RecordKind k);
const char* to_string(Consistency c);

/// One unit of system truth. Facts describe observed state and are written
/// by the key's lease owner; desires describe intended state and cite the
/// configuration render (or emergency/operator event) that produced them.
struct StateRecord {
  StateKey key;
  RecordKind kind = RecordKind::Fact;
  Value value;
  uint64_t version = 0;       // writer's counter; equals vv.get(owner)
  repl::VersionVector vv;     // drives eventual-consistency merges
  std::string owner;          // fact: lease-holding principal; desire: origin id
  std::string origin;         // desires only: render/emergency id
  uint64_t timestamp = 0;     // logical time at acceptance
  Consistency consistency = Consistency::Eventual;

  bool operator==(const StateRecord&) const = default;

  /// Canonical JSON with sorted fields; byte-stable across replicas with
  /// equal content. Used for audit records and convergence checks.
  std::string serialize() const;
  static Result<StateRecord> deserialize(std::string_view json_text);

  /// Cheap content hash over every field; equal records have equal
  /// fingerprints. The gossip digest uses this instead of serializing.
  uint64_t fingerprint() const;
};

}  // namespace fleet::state
