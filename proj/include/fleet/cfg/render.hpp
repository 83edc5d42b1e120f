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

#include <filesystem>
#include <optional>
#include <set>
#include <string>

#include "fleet/cfg/layers.hpp"
#include "fleet/core/record_log.hpp"
#include "fleet/state/store.hpp"

namespace fleet::cfg {

/// Resolves image names to manifest digests. Implemented by the simulator's
/// image registry.
class ImageCatalog {
 public:
  virtual ~ImageCatalog() = default;
  virtual std::optional<Digest> digest_of(const std::string& image_id) const = 0;
};

struct RenderChangeset {
  std::vector<state::StateKey> added;
  std::vector<state::StateKey> removed;
  std::vector<state::StateKey> modified;

  bool empty() const { return added.empty() && removed.empty() && modified.empty(); }
};

struct RenderResult {
  std::string render_id;
  std::vector<state::StateRecord> desires;  // records actually written
  RenderChangeset changes;
};

/// Compiles an effective config into per-entity desires:
///
///   groups.<g>.members   = n1,n2      (group definition, no desire)
///   groups.<g>.image     = <image id> -> (node, <member>, image) per member
///   groups.<g>.phase     = <phase>    -> (node, <member>, phase)
///   nodes.<id>.image     = <image id> -> (node, <id>, image)
///   nodes.<id>.phase     = <phase>    -> (node, <id>, phase)
///   services.<s>.<prop>  = v          -> (svc, <s>, <prop>)
///   cluster.<prop>       = v          -> (cluster, cluster, <prop>)
///   secret.<name>        = sealed:... -> (cluster, secrets, <name>), still sealed
///
/// Desires for nodes that have not been discovered yet are fine. Image
/// names must exist in the catalog. Each render gets a fresh id which every
/// written desire cites as its origin; unchanged desires are not rewritten,
/// so re-rendering an identical config is a no-op with an empty changeset.
/// Desires from an earlier render that the current config no longer
/// produces are retired.
class Renderer {
 public:
  Renderer(state::StateStore& store, const ImageCatalog& images,
           std::filesystem::path render_log);

  Result<RenderResult> render(const EffectiveConfig& effective);

  /// Restores the previous-render map from the render log (after restart).
  Result<void> recover();

  uint64_t renders_done() const { return render_seq_; }

 private:
  state::StateStore& store_;
  const ImageCatalog& images_;
  RecordFile log_;
  uint64_t render_seq_ = 0;
  std::map<state::StateKey, Value> previous_;  // what the last render produced
};

}  // namespace fleet::cfg
