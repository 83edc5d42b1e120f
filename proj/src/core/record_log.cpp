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

#include "fleet/core/record_log.hpp"

#include <cstring>
#include <fstream>

#include "fleet/core/value.hpp"

namespace fleet {
namespace record_log {

namespace {

void put_u32(std::string& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

uint32_t get_u32(const char* p) {
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(static_cast<uint8_t>(p[i])) << (8 * i);
  return v;
}

uint64_t get_u64(const char* p) {
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(static_cast<uint8_t>(p[i])) << (8 * i);
  return v;
}

}  // namespace

void append(std::string& out, std::string_view payload) {
  put_u32(out, static_cast<uint32_t>(payload.size()));
  put_u64(out, fnv1a64(payload));
  out.append(payload);
}

Result<std::vector<std::string>> decode_all(std::string_view data) {
  std::vector<std::string> out;
  size_t off = 0;
  while (off < data.size()) {
    if (data.size() - off < 12) {
      return Error{Errc::IntegrityError,
                   "truncated record header at offset " + std::to_string(off)};
    }
    const uint32_t len = get_u32(data.data() + off);
    const uint64_t sum = get_u64(data.data() + off + 4);
    off += 12;
    if (data.size() - off < len) {
      return Error{Errc::IntegrityError,
                   "truncated record payload at offset " + std::to_string(off)};
    }
    std::string_view payload = data.substr(off, len);
    if (fnv1a64(payload) != sum) {
      return Error{Errc::IntegrityError,
                   "checksum mismatch at offset " + std::to_string(off)};
    }
    out.emplace_back(payload);
    off += len;
  }
  return out;
}

}  // namespace record_log

Result<void> RecordFile::append(std::string_view payload) {
  std::string framed;
  record_log::append(framed, payload);
  std::ofstream f(path_, std::ios::binary | std::ios::app);
  if (!f) return Error{Errc::IoError, "cannot open " + path_.string()};
  f.write(framed.data(), static_cast<std::streamsize>(framed.size()));
  f.flush();
  if (!f) return Error{Errc::IoError, "write failed on " + path_.string()};
  return {};
}

Result<std::vector<std::string>> RecordFile::read_all() const {
  std::ifstream f(path_, std::ios::binary);
  if (!f) return std::vector<std::string>{};  // absent log reads as empty
  std::string data((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return record_log::decode_all(data);
}

Result<void> RecordFile::truncate() {
  std::ofstream f(path_, std::ios::binary | std::ios::trunc);
  if (!f) return Error{Errc::IoError, "cannot truncate " + path_.string()};
  return {};
}

}  // namespace fleet
