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

#include "fleet/model/topology.hpp"

namespace fleet::model {

std::string TopologyLocation::to_string() const {
  return "c" + std::to_string(chassis) + "-p" + std::to_string(port);
}

NodeIdentity derive_identity(TopologyLocation location, const Ipv6Prefix& site_prefix) {
  Ipv6 addr;
  for (size_t i = 0; i < 8; ++i) addr.bytes[i] = site_prefix.bytes[i];
  addr.set_group(4, static_cast<uint16_t>(location.chassis & 0xffff));
  addr.set_group(5, static_cast<uint16_t>(location.chassis >> 16));
  addr.set_group(6, location.port);
  addr.set_group(7, 0);
  NodeIdentity id;
  id.address = addr;
  id.hostname =
      "node-c" + std::to_string(location.chassis) + "-p" + std::to_string(location.port);
  return id;
}

Ipv6 address_from_hardware(Mac48 nic, const Ipv6Prefix& site_prefix) {
  // EUI-64-style split: the adapter's first three bytes, sixteen zero
  // filler bits, then its last three bytes.
  Ipv6 addr;
  for (size_t i = 0; i < 8; ++i) addr.bytes[i] = site_prefix.bytes[i];
  addr.bytes[8] = nic.bytes[0];
  addr.bytes[9] = nic.bytes[1];
  addr.bytes[10] = nic.bytes[2];
  addr.bytes[11] = 0;
  addr.bytes[12] = 0;
  addr.bytes[13] = nic.bytes[3];
  addr.bytes[14] = nic.bytes[4];
  addr.bytes[15] = nic.bytes[5];
  return addr;
}

}  // namespace fleet::model
