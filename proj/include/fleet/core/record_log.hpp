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
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "fleet/core/result.hpp"

namespace fleet {

/// Length-prefixed checksummed record framing used by every persisted log
/// (state audit, orchestrator journal, render log). Each record is
///   [u32 payload length | u64 fnv1a(payload) | payload bytes]
/// with little-endian integers. Truncated or checksum-failing records
/// surface as IntegrityError so a reader never consumes torn data.
namespace record_log {

void append(std::string& out, std::string_view payload);
Result<std::vector<std::string>> decode_all(std::string_view data);

}  // namespace record_log

/// Append-only record file. Appends are flushed per record.
class RecordFile {
 public:
  explicit RecordFile(std::filesystem::path path) : path_(std::move(path)) {}

  Result<void> append(std::string_view payload);
  Result<std::vector<std::string>> read_all() const;
  const std::filesystem::path& path() const { return path_; }
  Result<void> truncate();

 private:
  std::filesystem::path path_;
};

}  // namespace fleet
