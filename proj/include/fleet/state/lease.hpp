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

#include "fleet/state/key.hpp"

namespace fleet::state {

/// Half-open contiguous interval [lo, hi) in key order. Bounds need not be
/// valid keys themselves (empty components act as -infinity sentinels).
struct KeyRange {
  StateKey lo;
  StateKey hi;

  bool contains(const StateKey& k) const { return lo <= k && k < hi; }
  bool overlaps(const KeyRange& o) const { return lo < o.hi && o.lo < hi; }
  bool operator==(const KeyRange&) const = default;

  /// The single-key interval [k, successor(k)).
  static KeyRange single(const StateKey& k);
  /// Every property of one entity.
  static KeyRange entity(const std::string& ns, const std::string& entity);
  /// Every key in a namespace.
  static KeyRange ns(const std::string& ns);

  std::string to_string() const;
};

/// Exclusive write authority over a key range. Epochs strictly increase
/// across transfers of the same range, so two leases over a key can always
/// be ordered.
struct OwnershipLease {
  KeyRange range;
  std::string owner;
  uint64_t epoch = 0;

  bool operator==(const OwnershipLease&) const = default;
};

}  // namespace fleet::state
