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
#include <string>
#include <string_view>
#include <variant>

namespace fleet {

/// 64-bit FNV-1a. Fast, deterministic, non-cryptographic; used for content
/// digests, record checksums, and image layer identities.
constexpr uint64_t fnv1a64(std::string_view data, uint64_t seed = 0xcbf29ce484222325ULL) {
  uint64_t h = seed;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Content digest. Strong type so digests never mix with plain integers.
struct Digest {
  uint64_t bits = 0;

  auto operator<=>(const Digest&) const = default;

  std::string hex() const;
  static Digest of(std::string_view data) { return Digest{fnv1a64(data)}; }
  static bool parse_hex(std::string_view s, Digest& out);
};

/// Typed scalar carried by state records and configuration values:
/// boolean, integer, string, or digest.
class Value {
 public:
  using Rep = std::variant<bool, int64_t, std::string, Digest>;

  Value() : rep_(std::string{}) {}
  Value(bool b) : rep_(b) {}                      // NOLINT(google-explicit-constructor)
  Value(int64_t i) : rep_(i) {}                   // NOLINT(google-explicit-constructor)
  Value(int i) : rep_(static_cast<int64_t>(i)) {} // NOLINT(google-explicit-constructor)
  Value(std::string s) : rep_(std::move(s)) {}    // NOLINT(google-explicit-constructor)
  Value(const char* s) : rep_(std::string(s)) {}  // NOLINT(google-explicit-constructor)
  Value(Digest d) : rep_(d) {}                    // NOLINT(google-explicit-constructor)

  enum class Kind { Bool, Int, String, Digest };
  Kind kind() const { return static_cast<Kind>(rep_.index()); }

  bool is_bool() const { return rep_.index() == 0; }
  bool is_int() const { return rep_.index() == 1; }
  bool is_string() const { return rep_.index() == 2; }
  bool is_digest() const { return rep_.index() == 3; }

  bool as_bool() const { return std::get<bool>(rep_); }
  int64_t as_int() const { return std::get<int64_t>(rep_); }
  const std::string& as_string() const { return std::get<std::string>(rep_); }
  Digest as_digest() const { return std::get<Digest>(rep_); }

  auto operator<=>(const Value&) const = default;

  /// Textual form used in config files, the CLI, and audit records:
  /// true|false, decimal integer, digest:<hex>, or the raw string.
  std::string to_string() const;
  /// Inverse of to_string with the same precedence (bool, int, digest, string).
  static Value parse(std::string_view text);

  const Rep& rep() const { return rep_; }

 private:
  Rep rep_;
};

}  // namespace fleet
