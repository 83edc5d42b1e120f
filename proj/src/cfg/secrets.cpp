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

#include "fleet/cfg/secrets.hpp"

#include <sodium.h>

#include <fstream>

#include "fleet/core/rng.hpp"
#include "fleet/core/strings.hpp"

namespace fleet::cfg {

namespace {

void ensure_sodium() {
  static const int rc = sodium_init();
  (void)rc;
}

}  // namespace

std::string SealedSecret::serialize() const {
  return "sealed:" + key_id + ":" + to_hex(nonce.data(), nonce.size()) + ":" +
         to_hex(ciphertext.data(), ciphertext.size());
}

Result<SealedSecret> SealedSecret::parse(std::string_view text) {
  auto parts = split(text, ':');
  if (parts.size() != 4 || parts[0] != "sealed") {
    return Error{Errc::ParseError, "not a sealed secret"};
  }
  SealedSecret s;
  s.key_id = parts[1];
  auto nonce = from_hex(parts[2]);
  if (!nonce.ok()) return nonce.error();
  s.nonce = nonce.value();
  auto ct = from_hex(parts[3]);
  if (!ct.ok()) return ct.error();
  s.ciphertext = ct.value();
  return s;
}

Result<Keyring> Keyring::load(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) return Error{Errc::IoError, "cannot open keyring " + path.string()};
  Keyring ring;
  std::string line;
  while (std::getline(f, line)) {
    std::string_view sv = trim(line);
    if (sv.empty() || sv.front() == '#') continue;
    auto space = sv.find(' ');
    if (space == std::string_view::npos) {
      return Error{Errc::ParseError, "bad keyring line: " + line};
    }
    auto key = from_hex(trim(sv.substr(space + 1)));
    if (!key.ok()) return key.error();
    if (key.value().size() != crypto_secretbox_KEYBYTES) {
      return Error{Errc::ParseError, "keyring keys must be 32 bytes"};
    }
    ring.keys_[std::string(sv.substr(0, space))] = key.value();
  }
  return ring;
}

Keyring Keyring::generate(const std::vector<std::string>& key_ids, uint64_t seed) {
  Rng rng(seed);
  Keyring ring;
  for (const auto& id : key_ids) {
    std::vector<uint8_t> key(crypto_secretbox_KEYBYTES);
    for (auto& b : key) b = static_cast<uint8_t>(rng.next() & 0xff);
    ring.keys_[id] = std::move(key);
  }
  return ring;
}

Result<void> Keyring::save(const std::filesystem::path& path) const {
  std::ofstream f(path, std::ios::trunc);
  if (!f) return Error{Errc::IoError, "cannot write keyring " + path.string()};
  for (const auto& [id, key] : keys_) {
    f << id << ' ' << to_hex(key.data(), key.size()) << '\n';
  }
  return {};
}

void Keyring::add(const std::string& key_id, std::vector<uint8_t> key) {
  keys_[key_id] = std::move(key);
}

Result<SealedSecret> seal_secret(const Keyring& ring, std::string_view plaintext,
                                 const std::string& key_id) {
  ensure_sodium();
  auto it = ring.keys().find(key_id);
  if (it == ring.keys().end()) {
    return Error{Errc::KeyNotFound, "keyring has no key '" + key_id + "'"};
  }
  SealedSecret s;
  s.key_id = key_id;
  s.nonce.resize(crypto_secretbox_NONCEBYTES);
  randombytes_buf(s.nonce.data(), s.nonce.size());
  s.ciphertext.resize(plaintext.size() + crypto_secretbox_MACBYTES);
  crypto_secretbox_easy(s.ciphertext.data(),
                        reinterpret_cast<const unsigned char*>(plaintext.data()),
                        plaintext.size(), s.nonce.data(), it->second.data());
  return s;
}

Result<std::string> unseal_secret(const Keyring& ring, const SealedSecret& sealed) {
  ensure_sodium();
  auto it = ring.keys().find(sealed.key_id);
  if (it == ring.keys().end()) {
    return Error{Errc::KeyNotFound, "keyring has no key '" + sealed.key_id + "'"};
  }
  if (sealed.nonce.size() != crypto_secretbox_NONCEBYTES ||
      sealed.ciphertext.size() < crypto_secretbox_MACBYTES) {
    return Error{Errc::IntegrityError, "malformed sealed secret"};
  }
  std::string plaintext(sealed.ciphertext.size() - crypto_secretbox_MACBYTES, '\0');
  if (crypto_secretbox_open_easy(reinterpret_cast<unsigned char*>(plaintext.data()),
                                 sealed.ciphertext.data(), sealed.ciphertext.size(),
                                 sealed.nonce.data(), it->second.data()) != 0) {
    return Error{Errc::IntegrityError, "authentication failed"};
  }
  return plaintext;
}

}  // namespace fleet::cfg
