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

#include "fleet/core/value.hpp"

#include <charconv>
#include <cstdio>

namespace fleet {

std::string Digest::hex() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(bits));
  return std::string(buf, 16);
}

bool Digest::parse_hex(std::string_view s, Digest& out) {
  if (s.empty() || s.size() > 16) return false;
  uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v, 16);
  if (ec != std::errc{} || p != s.data() + s.size()) return false;
  out.bits = v;
  return true;
}

std::string Value::to_string() const {
  switch (kind()) {
    case Kind::Bool:
      return as_bool() ? "true" : "false";
    case Kind::Int:
      return std::to_string(as_int());
    case Kind::Digest:
      return "digest:" + as_digest().hex();
    case Kind::String:
      return as_string();
  }
  return {};
}

Value Value::parse(std::string_view text) {
  if (text == "true") return Value(true);
  if (text == "false") return Value(false);
  if (text.rfind("digest:", 0) == 0) {
    Digest d;
    if (Digest::parse_hex(text.substr(7), d)) return Value(d);
  }
  if (!text.empty()) {
    int64_t v = 0;
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v, 10);
    if (ec == std::errc{} && p == text.data() + text.size()) return Value(v);
  }
  return Value(std::string(text));
}

}  // namespace fleet
