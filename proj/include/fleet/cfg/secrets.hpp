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
#include <map>
#include <string>
#include <vector>

#include "fleet/core/result.hpp"

namespace fleet::cfg {

/// Authenticated encrypted-at-rest secret. Plaintext never touches disk;
/// tampering with the ciphertext fails the integrity check on unseal.
struct SealedSecret {
  std::string key_id;
  std::vector<uint8_t> nonce;
  std::vector<uint8_t> ciphertext;  // includes the auth tag

  /// "sealed:<key id>:<nonce hex>:<ciphertext hex>"
  std::string serialize() const;
  static Result<SealedSecret> parse(std::string_view text);
};

/// Local file of named 32-byte keys, one per line: "<key id> <hex key>".
class Keyring {
 public:
  static Result<Keyring> load(const std::filesystem::path& path);
  static Keyring generate(const std::vector<std::string>& key_ids, uint64_t seed);

  Result<void> save(const std::filesystem::path& path) const;
  bool has(const std::string& key_id) const { return keys_.count(key_id) != 0; }
  void add(const std::string& key_id, std::vector<uint8_t> key);

  const std::map<std::string, std::vector<uint8_t>>& keys() const { return keys_; }

 private:
  std::map<std::string, std::vector<uint8_t>> keys_;
};

/// Seals plaintext under the named key with a fresh random nonce; sealing
/// the same plaintext twice yields different ciphertexts.
Result<SealedSecret> seal_secret(const Keyring& ring, std::string_view plaintext,
                                 const std::string& key_id);

/// Recovers the exact plaintext, in memory only. IntegrityError when the
/// ciphertext or nonce was modified; KeyNotFound when the keyring lacks
/// the key id.
Result<std::string> unseal_secret(const Keyring& ring, const SealedSecret& sealed);

}  // namespace fleet::cfg
