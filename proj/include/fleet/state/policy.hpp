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

#include <string>
#include <string_view>
#include <vector>

#include "fleet/core/result.hpp"
#include "fleet/state/record.hpp"

namespace fleet::state {

/// Assigns each key its consistency class by prefix match. Defaults:
/// power and phase properties are Strong, everything else Eventual.
/// Policy files extend or override with lines like
///   strong   prop=power
///   eventual ns=node prop=image
/// The most specific matching rule (longest combined prefix) wins.
class ConsistencyPolicy {
 public:
  struct Rule {
    std::string ns_prefix;
    std::string entity_prefix;
    std::string prop_prefix;
    Consistency klass = Consistency::Eventual;
  };

  /// Built-in defaults only.
  static ConsistencyPolicy defaults();

  static Result<ConsistencyPolicy> parse(std::string_view text);

  void add_rule(Rule r) { rules_.push_back(std::move(r)); }

  Consistency classify(const StateKey& key) const;

 private:
  std::vector<Rule> rules_;
};

}  // namespace fleet::state
