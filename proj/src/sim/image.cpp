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

#include "fleet/sim/image.hpp"

namespace fleet::sim {

const char* to_string(ImageKind k) {
  switch (k) {
    case ImageKind::MinimalOs: return "minimal_os";
    case ImageKind::ServiceContainer: return "service_container";
    case ImageKind::JobContainer: return "job_container";
  }
  return "?";
}

Digest ImageManifest::digest() const {
  std::string material = id;
  for (const auto& layer : layers) material += "|" + layer.digest.hex();
  return Digest::of(material);
}

uint64_t ImageManifest::total_bytes() const {
  uint64_t sum = 0;
  for (const auto& layer : layers) sum += layer.size;
  return sum;
}

void ImageRegistry::add(ImageManifest manifest) {
  id_by_digest_[manifest.digest()] = manifest.id;
  by_id_[manifest.id] = std::move(manifest);
}

const ImageManifest* ImageRegistry::find(const std::string& id) const {
  auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : &it->second;
}

const ImageManifest* ImageRegistry::find_by_digest(Digest d) const {
  auto it = id_by_digest_.find(d);
  return it == id_by_digest_.end() ? nullptr : find(it->second);
}

std::optional<Digest> ImageRegistry::digest_of(const std::string& image_id) const {
  const ImageManifest* m = find(image_id);
  if (m == nullptr) return std::nullopt;
  return m->digest();
}

std::vector<std::string> ImageRegistry::ids() const {
  std::vector<std::string> out;
  out.reserve(by_id_.size());
  for (const auto& [id, m] : by_id_) out.push_back(id);
  return out;
}

Result<std::vector<ImageManifest>> build_images(BuildPolicy policy,
                                                const std::vector<std::string>& node_ids,
                                                const ImageRecipe& recipe) {
  if (recipe.id.empty() || recipe.layers.empty()) {
    return Error{Errc::ValidationError, "recipe must name an id and at least one layer"};
  }
  auto base_layer = [&](const std::pair<std::string, uint64_t>& l,
                        const std::string& salt) -> ImageLayer {
    return ImageLayer{l.first, Digest::of(recipe.id + "/" + l.first + "/" + salt), l.second};
  };

  std::vector<ImageManifest> out;
  switch (policy) {
    case BuildPolicy::Generalized: {
      // One shared image; per-node specialization is deferred to boot
      // parameters.
      ImageManifest m;
      m.id = recipe.id;
      m.kind = recipe.kind;
      for (const auto& l : recipe.layers) m.layers.push_back(base_layer(l, ""));
      out.push_back(std::move(m));
      break;
    }
    case BuildPolicy::PerNode: {
      for (const auto& node : node_ids) {
        ImageManifest m;
        m.id = recipe.id + "@" + node;
        m.kind = recipe.kind;
        for (const auto& l : recipe.layers) m.layers.push_back(base_layer(l, node));
        out.push_back(std::move(m));
      }
      break;
    }
    case BuildPolicy::OverlayPerNode: {
      ImageManifest base;
      base.id = recipe.id;
      base.kind = recipe.kind;
      for (const auto& l : recipe.layers) base.layers.push_back(base_layer(l, ""));
      out.push_back(base);
      for (const auto& node : node_ids) {
        ImageManifest overlay;
        overlay.id = recipe.id + "+overlay@" + node;
        overlay.kind = recipe.kind;
        overlay.layers = base.layers;
        overlay.layers.push_back(
            ImageLayer{"overlay", Digest::of(recipe.id + "/overlay/" + node), 4096});
        out.push_back(std::move(overlay));
      }
      break;
    }
  }
  return out;
}

}  // namespace fleet::sim
