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
#include <optional>
#include <string>

#include "fleet/core/ipv6.hpp"
#include "fleet/core/value.hpp"
#include "fleet/model/phase.hpp"

namespace fleet::model {

/// Where a node is wired: (switch chassis id, switch port id). Unique
/// fleet-wide; the source of node identity.
struct TopologyLocation {
  uint32_t chassis = 0;
  uint16_t port = 0;

  auto operator<=>(const TopologyLocation&) const = default;
  std::string to_string() const;
};

struct NodeIdentity {
  Ipv6 address;
  std::string hostname;
};

/// Stateless identity derivation. The address is the site prefix followed
/// by the chassis id (32 bits, low 16-bit group first), the port id
/// (16 bits), and 16 zero bits; the hostname is "node-c{chassis}-p{port}".
/// Deterministic and injective in the location; independent of the node's
/// hardware address, so a replaced node keeps its name.
NodeIdentity derive_identity(TopologyLocation location, const Ipv6Prefix& site_prefix);

/// SLAAC-style fallback: the 48-bit adapter address is embedded in the
/// interface identifier EUI-64 style (first three bytes, a zero filler
/// word, last three bytes). No server-side record of the assignment exists
/// in either mode.
Ipv6 address_from_hardware(Mac48 nic, const Ipv6Prefix& site_prefix);

/// Inventory record for one node.
struct NodeRecord {
  std::string id;
  TopologyLocation location;
  Mac48 nic;
  std::string bmc_address;
  std::optional<Digest> image;
  NodePhase phase = NodePhase::Unknown;
};

}  // namespace fleet::model
