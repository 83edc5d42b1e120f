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

#include "fleet/core/ipv6.hpp"

#include <charconv>
#include <cstdio>

#include "fleet/core/strings.hpp"

namespace fleet {

std::string Ipv6::to_string() const {
  // RFC 5952: compress the longest run of two or more zero groups,
  // leftmost on ties; lowercase hex without leading zeros.
  int best_start = -1, best_len = 0;
  for (int i = 0; i < 8;) {
    if (group(i) != 0) {
      ++i;
      continue;
    }
    int j = i;
    while (j < 8 && group(j) == 0) ++j;
    if (j - i > best_len) {
      best_len = j - i;
      best_start = i;
    }
    i = j;
  }
  if (best_len < 2) best_start = -1;

  std::string out;
  char buf[8];
  for (int i = 0; i < 8; ++i) {
    if (best_start >= 0 && i == best_start) {
      out += "::";
      i += best_len - 1;
      continue;
    }
    if (!out.empty() && out.back() != ':') out += ':';
    std::snprintf(buf, sizeof buf, "%x", group(i));
    out += buf;
  }
  return out;
}

Result<Ipv6> Ipv6::parse(std::string_view text) {
  auto bad = [&](const char* why) {
    return Error{Errc::ParseError, std::string(why) + ": " + std::string(text)};
  };
  std::string_view head = text, tail;
  bool has_gap = false;
  if (auto pos = text.find("::"); pos != std::string_view::npos) {
    has_gap = true;
    head = text.substr(0, pos);
    tail = text.substr(pos + 2);
    if (tail.find("::") != std::string_view::npos) return bad("multiple ::");
  }
  auto parse_groups = [&](std::string_view part, std::vector<uint16_t>& out) -> bool {
    if (part.empty()) return true;
    for (const auto& g : split(part, ':')) {
      if (g.empty() || g.size() > 4) return false;
      uint32_t v = 0;
      auto [p, ec] = std::from_chars(g.data(), g.data() + g.size(), v, 16);
      if (ec != std::errc{} || p != g.data() + g.size() || v > 0xffff) return false;
      out.push_back(static_cast<uint16_t>(v));
    }
    return true;
  };
  std::vector<uint16_t> front, back;
  if (!parse_groups(head, front) || !parse_groups(tail, back)) return bad("bad group");
  const size_t total = front.size() + back.size();
  if (has_gap ? total >= 8 : total != 8) return bad("wrong group count");

  Ipv6 addr;
  for (size_t i = 0; i < front.size(); ++i) addr.set_group(i, front[i]);
  for (size_t i = 0; i < back.size(); ++i) addr.set_group(8 - back.size() + i, back[i]);
  return addr;
}

Result<Ipv6Prefix> Ipv6Prefix::parse(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    return Error{Errc::ParseError, "prefix missing /64 mask: " + std::string(text)};
  }
  if (trim(text.substr(slash + 1)) != "64") {
    return Error{Errc::ParseError, "only /64 prefixes are supported: " + std::string(text)};
  }
  auto addr = Ipv6::parse(text.substr(0, slash));
  if (!addr.ok()) return addr.error();
  Ipv6Prefix p;
  for (size_t i = 0; i < 8; ++i) p.bytes[i] = addr.value().bytes[i];
  return p;
}

std::string Ipv6Prefix::to_string() const {
  Ipv6 a;
  for (size_t i = 0; i < 8; ++i) a.bytes[i] = bytes[i];
  return a.to_string() + "/64";
}

std::string Mac48::to_string() const {
  char buf[18];
  std::snprintf(buf, sizeof buf, "%02x:%02x:%02x:%02x:%02x:%02x", bytes[0], bytes[1],
                bytes[2], bytes[3], bytes[4], bytes[5]);
  return buf;
}

Result<Mac48> Mac48::parse(std::string_view text) {
  auto parts = split(text, ':');
  if (parts.size() != 6) {
    return Error{Errc::ParseError, "bad hardware address: " + std::string(text)};
  }
  Mac48 mac;
  for (size_t i = 0; i < 6; ++i) {
    auto bytes = from_hex(parts[i]);
    if (!bytes.ok() || bytes.value().size() != 1) {
      return Error{Errc::ParseError, "bad hardware address: " + std::string(text)};
    }
    mac.bytes[i] = bytes.value()[0];
  }
  return mac;
}

}  // namespace fleet
