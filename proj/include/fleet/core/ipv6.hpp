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

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "fleet/core/result.hpp"

namespace fleet {

/// 128-bit address with RFC 5952 canonical text formatting.
struct Ipv6 {
  std::array<uint8_t, 16> bytes{};

  auto operator<=>(const Ipv6&) const = default;

  uint16_t group(size_t i) const {
    return static_cast<uint16_t>((bytes[2 * i] << 8) | bytes[2 * i + 1]);
  }
  void set_group(size_t i, uint16_t v) {
    bytes[2 * i] = static_cast<uint8_t>(v >> 8);
    bytes[2 * i + 1] = static_cast<uint8_t>(v & 0xff);
  }

  std::string to_string() const;
  static Result<Ipv6> parse(std::string_view text);
};

/// The /64 site prefix addresses are derived under.
struct Ipv6Prefix {
  std::array<uint8_t, 8> bytes{};

  /// Accepts "fd00::/64" style text; the mask must be exactly 64.
  static Result<Ipv6Prefix> parse(std::string_view text);
  std::string to_string() const;
};

/// 48-bit network adapter hardware address.
struct Mac48 {
  std::array<uint8_t, 6> bytes{};

  auto operator<=>(const Mac48&) const = default;

  std::string to_string() const;
  static Result<Mac48> parse(std::string_view text);
};

}  // namespace fleet
