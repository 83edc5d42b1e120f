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

#include "fleet/repl/version_vector.hpp"

namespace fleet::repl {

VersionVector::Order VersionVector::compare(const VersionVector& other) const {
  bool less = false, greater = false;
  auto a = counters_.begin();
  auto b = other.counters_.begin();
  while (a != counters_.end() || b != other.counters_.end()) {
    if (b == other.counters_.end() || (a != counters_.end() && a->first < b->first)) {
      greater = true;  // component present here, zero there
      ++a;
    } else if (a == counters_.end() || b->first < a->first) {
      less = true;
      ++b;
    } else {
      if (a->second < b->second) less = true;
      if (a->second > b->second) greater = true;
      ++a;
      ++b;
    }
  }
  if (less && greater) return Order::Concurrent;
  if (less) return Order::Before;
  if (greater) return Order::After;
  return Order::Equal;
}

VersionVector VersionVector::merged(const VersionVector& other) const {
  VersionVector out = *this;
  for (const auto& [id, v] : other.counters_) {
    auto& slot = out.counters_[id];
    if (v > slot) slot = v;
  }
  return out;
}

uint64_t VersionVector::total() const {
  uint64_t sum = 0;
  for (const auto& [id, v] : counters_) sum += v;
  return sum;
}

std::string VersionVector::to_string() const {
  std::string out = "{";
  bool first = true;
  for (const auto& [id, v] : counters_) {
    if (!first) out += ",";
    first = false;
    out += id + ":" + std::to_string(v);
  }
  out += "}";
  return out;
}

}  // namespace fleet::repl
