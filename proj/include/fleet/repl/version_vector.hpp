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

#include <compare>
#include <cstdint>
#include <map>
#include <string>

namespace fleet::repl {

/// Per-writer counters. Componentwise comparison gives the partial order
/// used by the eventual-consistency merge.
class VersionVector {
 public:
  enum class Order { Equal, Before, After, Concurrent };

  uint64_t get(const std::string& id) const {
    auto it = counters_.find(id);
    return it == counters_.end() ? 0 : it->second;
  }
  void set(const std::string& id, uint64_t v) {
    if (v == 0) {
      counters_.erase(id);
    } else {
      counters_[id] = v;
    }
  }
  uint64_t bump(const std::string& id) { return ++counters_[id]; }

  Order compare(const VersionVector& other) const;

  /// Componentwise maximum.
  VersionVector merged(const VersionVector& other) const;

  /// Sum of all counters. Strictly monotone under dominance, so ordering
  /// records by (total, timestamp, owner) yields a total order that never
  /// contradicts the componentwise partial order.
  uint64_t total() const;

  bool operator==(const VersionVector&) const = default;

  const std::map<std::string, uint64_t>& counters() const { return counters_; }

  std::string to_string() const;

 private:
  std::map<std::string, uint64_t> counters_;
};

}  // namespace fleet::repl
