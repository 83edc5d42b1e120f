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

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "fleet/core/result.hpp"

namespace fleet {

std::string_view trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
std::string join(const std::vector<std::string>& parts, std::string_view sep);
bool starts_with(std::string_view s, std::string_view prefix);

std::string to_hex(const uint8_t* data, size_t len);
Result<std::vector<uint8_t>> from_hex(std::string_view hex);

/// One parsed line of the flat config-file dialect shared by scenario,
/// mutation-graph, flow, and DAG files: a keyword followed by positional
/// and key=value tokens. Lines are '#'-commented, whitespace separated.
struct FieldLine {
  size_t line_no = 0;
  std::string keyword;
  std::vector<std::string> positional;
  std::map<std::string, std::string> kv;

  bool has(const std::string& k) const { return kv.count(k) != 0; }
  std::string get(const std::string& k, std::string fallback = {}) const;
  Result<std::string> require(const std::string& k) const;
  Result<uint64_t> require_u64(const std::string& k) const;
  Result<uint64_t> get_u64(const std::string& k, uint64_t fallback) const;
};

/// Parses a whole document into field lines, skipping blanks and comments.
Result<std::vector<FieldLine>> parse_field_lines(std::string_view text);

Result<uint64_t> parse_u64(std::string_view s);
Result<int64_t> parse_i64(std::string_view s);

}  // namespace fleet
