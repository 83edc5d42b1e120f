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

#include "fleet/state/lease.hpp"

namespace fleet::state {

namespace {
// Lexicographic successor: appending NUL gives the smallest string greater
// than s, so [x, successor(x)) covers exactly x for the last component.
std::string successor(std::string s) {
  s.push_back('\0');
  return s;
}
}  // namespace

KeyRange KeyRange::single(const StateKey& k) {
  return KeyRange{k, StateKey{k.ns, k.entity, successor(k.prop)}};
}

KeyRange KeyRange::entity(const std::string& ns, const std::string& entity) {
  return KeyRange{StateKey{ns, entity, ""}, StateKey{ns, successor(entity), ""}};
}

KeyRange KeyRange::ns(const std::string& ns) {
  return KeyRange{StateKey{ns, "", ""}, StateKey{successor(ns), "", ""}};
}

std::string KeyRange::to_string() const {
  return "[" + lo.to_string() + ", " + hi.to_string() + ")";
}

}  // namespace fleet::state
