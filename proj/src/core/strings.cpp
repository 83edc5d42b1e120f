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

#include "fleet/core/strings.hpp"

#include <charconv>
#include <sstream>

namespace fleet {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(s.substr(start));
      break;
    }
    out.emplace_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.size() >= prefix.size() && s.substr(0, prefix.size()) == prefix;
}

std::string to_hex(const uint8_t* data, size_t len) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (size_t i = 0; i < len; ++i) {
    out.push_back(digits[data[i] >> 4]);
    out.push_back(digits[data[i] & 0xf]);
  }
  return out;
}

Result<std::vector<uint8_t>> from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) return Error{Errc::ParseError, "odd-length hex string"};
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  std::vector<uint8_t> out;
  out.reserve(hex.size() / 2);
  for (size_t i = 0; i < hex.size(); i += 2) {
    int hi = nibble(hex[i]);
    int lo = nibble(hex[i + 1]);
    if (hi < 0 || lo < 0) return Error{Errc::ParseError, "bad hex digit"};
    out.push_back(static_cast<uint8_t>((hi << 4) | lo));
  }
  return out;
}

std::string FieldLine::get(const std::string& k, std::string fallback) const {
  auto it = kv.find(k);
  return it == kv.end() ? std::move(fallback) : it->second;
}

Result<std::string> FieldLine::require(const std::string& k) const {
  auto it = kv.find(k);
  if (it == kv.end()) {
    return Error{Errc::ParseError,
                 "line " + std::to_string(line_no) + ": missing " + k + "="};
  }
  return it->second;
}

Result<uint64_t> FieldLine::require_u64(const std::string& k) const {
  auto s = require(k);
  if (!s.ok()) return s.error();
  return parse_u64(s.value());
}

Result<uint64_t> FieldLine::get_u64(const std::string& k, uint64_t fallback) const {
  auto it = kv.find(k);
  if (it == kv.end()) return fallback;
  return parse_u64(it->second);
}

Result<std::vector<FieldLine>> parse_field_lines(std::string_view text) {
  std::vector<FieldLine> out;
  size_t line_no = 0;
  for (const auto& raw : split(text, '\n')) {
    ++line_no;
    std::string_view line = trim(raw);
    if (auto pos = line.find('#'); pos != std::string_view::npos) {
      line = trim(line.substr(0, pos));
    }
    if (line.empty()) continue;

    FieldLine fl;
    fl.line_no = line_no;
    std::istringstream iss{std::string(line)};
    std::string tok;
    while (iss >> tok) {
      if (fl.keyword.empty()) {
        fl.keyword = tok;
        continue;
      }
      auto eq = tok.find('=');
      if (eq == std::string::npos) {
        fl.positional.push_back(tok);
      } else {
        const std::string k = tok.substr(0, eq);
        if (fl.kv.count(k)) {
          return Error{Errc::ParseError,
                       "line " + std::to_string(line_no) + ": duplicate field " + k};
        }
        fl.kv.emplace(k, tok.substr(eq + 1));
      }
    }
    out.push_back(std::move(fl));
  }
  return out;
}

Result<uint64_t> parse_u64(std::string_view s) {
  uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v, 10);
  if (ec != std::errc{} || p != s.data() + s.size()) {
    return Error{Errc::ParseError, "not an unsigned integer: " + std::string(s)};
  }
  return v;
}

Result<int64_t> parse_i64(std::string_view s) {
  int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v, 10);
  if (ec != std::errc{} || p != s.data() + s.size()) {
    return Error{Errc::ParseError, "not an integer: " + std::string(s)};
  }
  return v;
}

}  // namespace fleet
