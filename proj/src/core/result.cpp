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

#include "fleet/core/result.hpp"

namespace fleet {

const char* to_string(Errc c) {
  switch (c) {
    case Errc::NotOwner: return "NotOwner";
    case Errc::StaleVersion: return "StaleVersion";
    case Errc::NotFound: return "NotFound";
    case Errc::ConsistencyMismatch: return "ConsistencyMismatch";
    case Errc::CrossStoreQuery: return "CrossStoreQuery";
    case Errc::EpochStale: return "EpochStale";
    case Errc::WrongCurrentOwner: return "WrongCurrentOwner";
    case Errc::MalformedKey: return "MalformedKey";
    case Errc::NotLeader: return "NotLeader";
    case Errc::NoQuorum: return "NoQuorum";
    case Errc::RoundFailed: return "RoundFailed";
    case Errc::KeyMismatch: return "KeyMismatch";
    case Errc::Unreachable: return "Unreachable";
    case Errc::InvalidTransition: return "InvalidTransition";
    case Errc::LeaseLost: return "LeaseLost";
    case Errc::InvalidPlan: return "InvalidPlan";
    case Errc::PartialFailure: return "PartialFailure";
    case Errc::CyclicDependency: return "CyclicDependency";
    case Errc::ReadinessFailed: return "ReadinessFailed";
    case Errc::UnknownEventKind: return "UnknownEventKind";
    case Errc::CheckpointInvalid: return "CheckpointInvalid";
    case Errc::DuplicateName: return "DuplicateName";
    case Errc::ValidationError: return "ValidationError";
    case Errc::DiscoveryTimeout: return "DiscoveryTimeout";
    case Errc::DuplicateAttachment: return "DuplicateAttachment";
    case Errc::AddressTimeout: return "AddressTimeout";
    case Errc::InsufficientMemory: return "InsufficientMemory";
    case Errc::DigestMismatch: return "DigestMismatch";
    case Errc::UnknownNode: return "UnknownNode";
    case Errc::UnknownSwitch: return "UnknownSwitch";
    case Errc::BmcUnreachable: return "BmcUnreachable";
    case Errc::AmbiguousPrecedence: return "AmbiguousPrecedence";
    case Errc::UnknownImage: return "UnknownImage";
    case Errc::KeyNotFound: return "KeyNotFound";
    case Errc::IntegrityError: return "IntegrityError";
    case Errc::NegativeDuration: return "NegativeDuration";
    case Errc::UnknownRequestType: return "UnknownRequestType";
    case Errc::NoSamples: return "NoSamples";
    case Errc::AllEndpointsFailed: return "AllEndpointsFailed";
    case Errc::Unauthorized: return "Unauthorized";
    case Errc::ParseError: return "ParseError";
    case Errc::IoError: return "IoError";
    case Errc::Internal: return "Internal";
  }
  return "Unknown";
}

std::string Error::to_string() const {
  std::string s = fleet::to_string(code);
  if (!detail.empty()) {
    s += ": ";
    s += detail;
  }
  return s;
}

}  // namespace fleet
