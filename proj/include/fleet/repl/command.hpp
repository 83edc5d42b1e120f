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

#include <optional>
#include <string>

#include "fleet/core/result.hpp"
#include "fleet/state/store.hpp"

namespace fleet::repl {

/// A state mutation carried through the replicated log. Committed entries
/// are applied to every replica's store in log order, which keeps the
/// Strong-class keys identical across replicas.
struct Command {
  enum class Op { PutFact, PutDesire, Transfer };
  Op op = Op::PutFact;
  std::string owner;  // PutFact: principal; PutDesire: origin
  state::StateKey key;
  Value value;
  uint64_t version = 0;
  // Transfer
  state::KeyRange range;
  std::optional<std::string> from;
  std::string to;
  uint64_t epoch = 0;

  std::string serialize() const;
  static Result<Command> deserialize(std::string_view text);
};

/// Applies one committed command. Deterministic given the store state.
Result<void> apply_command(state::StateStore& store, const Command& cmd);

}  // namespace fleet::repl
