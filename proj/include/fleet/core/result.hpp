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

#include <cassert>
#include <optional>
#include <string>
#include <utility>
#include <variant>

namespace fleet {

enum class Errc {
  // state store
  NotOwner,
  StaleVersion,
  NotFound,
  ConsistencyMismatch,
  CrossStoreQuery,
  EpochStale,
  WrongCurrentOwner,
  MalformedKey,
  // replication
  NotLeader,
  NoQuorum,
  RoundFailed,
  KeyMismatch,
  // fleet model
  Unreachable,
  InvalidTransition,
  // orchestrator
  LeaseLost,
  InvalidPlan,
  PartialFailure,
  CyclicDependency,
  ReadinessFailed,
  UnknownEventKind,
  CheckpointInvalid,
  DuplicateName,
  ValidationError,
  // provisioning simulator
  DiscoveryTimeout,
  DuplicateAttachment,
  AddressTimeout,
  InsufficientMemory,
  DigestMismatch,
  UnknownNode,
  UnknownSwitch,
  BmcUnreachable,
  // config layers
  AmbiguousPrecedence,
  UnknownImage,
  KeyNotFound,
  IntegrityError,
  // metrics
  NegativeDuration,
  UnknownRequestType,
  NoSamples,
  // gateway
  AllEndpointsFailed,
  Unauthorized,
  // generic
  ParseError,
  IoError,
  Internal,
};

const char* to_string(Errc c);

struct Error {
  Errc code;
  std::string detail;

  std::string to_string() const;
};

inline Error make_error(Errc code, std::string detail = {}) {
  return Error{code, std::move(detail)};
}

/// Value-or-error return type used across the library. Errors carry a
/// machine-checkable code plus a human-readable detail string.
template <typename T>
class [[nodiscard]] Result {
 public:
  Result(T value) : rep_(std::move(value)) {}                 // NOLINT(google-explicit-constructor)
  Result(Error error) : rep_(std::move(error)) {}             // NOLINT(google-explicit-constructor)
  Result(Errc code, std::string detail = {}) : rep_(Error{code, std::move(detail)}) {}

  bool ok() const { return std::holds_alternative<T>(rep_); }
  explicit operator bool() const { return ok(); }

  const T& value() const& {
    assert(ok());
    return std::get<T>(rep_);
  }
  T& value() & {
    assert(ok());
    return std::get<T>(rep_);
  }
  T&& take() && {
    assert(ok());
    return std::get<T>(std::move(rep_));
  }

  const Error& error() const {
    assert(!ok());
    return std::get<Error>(rep_);
  }
  Errc code() const { return error().code; }

  const T* operator->() const { return &value(); }
  const T& operator*() const& { return value(); }

 private:
  std::variant<T, Error> rep_;
};

template <>
class [[nodiscard]] Result<void> {
 public:
  Result() = default;
  Result(Error error) : error_(std::move(error)) {}           // NOLINT(google-explicit-constructor)
  Result(Errc code, std::string detail = {}) : error_(Error{code, std::move(detail)}) {}

  bool ok() const { return !error_.has_value(); }
  explicit operator bool() const { return ok(); }

  const Error& error() const {
    assert(!ok());
    return *error_;
  }
  Errc code() const { return error().code; }

 private:
  std::optional<Error> error_;
};

inline Result<void> ok_result() { return {}; }

}  // namespace fleet
