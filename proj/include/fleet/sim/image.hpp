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

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fleet/cfg/render.hpp"
#include "fleet/core/result.hpp"
#include "fleet/core/value.hpp"

namespace fleet::sim {

enum class ImageKind { MinimalOs, ServiceContainer, JobContainer };
const char* to_string(ImageKind k);

struct ImageLayer {
  std::string name;
  Digest digest;
  uint64_t size = 0;
};

/// Layered image. Minimal-OS manifests keep a read-only root with a
/// memory overlay; the first layer stays resident for the life of the boot.
struct ImageManifest {
  std::string id;
  ImageKind kind = ImageKind::MinimalOs;
  std::vector<ImageLayer> layers;
  bool read_only_root = true;
  bool overlay = true;

  Digest digest() const;
  uint64_t total_bytes() const;
};

/// Known images by id and by manifest digest; doubles as the image catalog
/// the config renderer validates against.
class ImageRegistry : public cfg::ImageCatalog {
 public:
  void add(ImageManifest manifest);
  const ImageManifest* find(const std::string& id) const;
  const ImageManifest* find_by_digest(Digest d) const;
  std::optional<Digest> digest_of(const std::string& image_id) const override;
  std::vector<std::string> ids() const;

 private:
  std::map<std::string, ImageManifest> by_id_;
  std::map<Digest, std::string> id_by_digest_;
};

/// Base recipe images are built from: named layers with sizes.
struct ImageRecipe {
  std::string id;
  ImageKind kind = ImageKind::MinimalOs;
  std::vector<std::pair<std::string, uint64_t>> layers;  // (name, bytes)
};

enum class BuildPolicy { Generalized, PerNode, OverlayPerNode };

/// The image-building spectrum:
///  - Generalized: one shared manifest; node specialization rides on boot
///    parameters.
///  - PerNode: one fully customized manifest per node, distinct digests.
///  - OverlayPerNode: one shared base plus a small per-node overlay layer
///    applied at boot.
Result<std::vector<ImageManifest>> build_images(BuildPolicy policy,
                                                const std::vector<std::string>& node_ids,
                                                const ImageRecipe& recipe);

}  // namespace fleet::sim
