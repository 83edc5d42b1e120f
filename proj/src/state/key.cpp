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

#include "fleet/state/key.hpp"

#include "fleet/core/strings.hpp"

namespace fleet::state {

Result<StateKey> StateKey::parse(std::string_view text) {
  auto parts = split(text, '/');
  if (parts.size() != 3 || parts[0].empty() || parts[1].empty() || parts[2].empty()) {
    return Error{Errc::MalformedKey, "expected ns/entity/prop: " + std::string(text)};
  }
  return StateKey{parts[0], parts[1], parts[2]};
}

}  // namespace fleet::state
