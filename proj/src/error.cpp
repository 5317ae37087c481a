// Copyright 2026 The zkdid Authors.
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

#include "zkdid/error.hpp"

namespace zkdid {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kZeroInverse: return "ZeroInverse";
    case ErrorCode::kUnsupportedOrder: return "UnsupportedOrder";
    case ErrorCode::kSizeMismatch: return "SizeMismatch";
    case ErrorCode::kEmptyAttributes: return "EmptyAttributes";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kPredicateUnsatisfied: return "PredicateUnsatisfied";
    case ErrorCode::kMembershipMismatch: return "MembershipMismatch";
    case ErrorCode::kAttributeOutOfRange: return "AttributeOutOfRange";
    case ErrorCode::kTraceTooShort: return "TraceTooShort";
    case ErrorCode::kColumnMismatch: return "ColumnMismatch";
    case ErrorCode::kDomainTooSmall: return "DomainTooSmall";
    case ErrorCode::kInternalDegreeOverflow: return "InternalDegreeOverflow";
    case ErrorCode::kDecodeError: return "DecodeError";
    case ErrorCode::kUnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::kInvalidParams: return "InvalidParams";
    case ErrorCode::kCapacityExhausted: return "CapacityExhausted";
    case ErrorCode::kSlotNotOccupied: return "SlotNotOccupied";
    case ErrorCode::kUnknownEpoch: return "UnknownEpoch";
    case ErrorCode::kKeysExhausted: return "KeysExhausted";
    case ErrorCode::kInvalidDid: return "InvalidDid";
    case ErrorCode::kBadSignature: return "BadSignature";
    case ErrorCode::kUnauthorized: return "Unauthorized";
    case ErrorCode::kUnknownDid: return "UnknownDid";
    case ErrorCode::kInvalidTransition: return "InvalidTransition";
    case ErrorCode::kEpochGap: return "EpochGap";
    case ErrorCode::kNotGuardian: return "NotGuardian";
    case ErrorCode::kDuplicateApproval: return "DuplicateApproval";
    case ErrorCode::kTimelockNotElapsed: return "TimelockNotElapsed";
    case ErrorCode::kNoPendingRecovery: return "NoPendingRecovery";
    case ErrorCode::kReplayedSignature: return "ReplayedSignature";
    case ErrorCode::kExpired: return "Expired";
    case ErrorCode::kAlreadyRegistered: return "AlreadyRegistered";
    case ErrorCode::kNoMatchingCredential: return "NoMatchingCredential";
    case ErrorCode::kRevoked: return "Revoked";
    case ErrorCode::kStaleRootPolicy: return "StaleRootPolicy";
    case ErrorCode::kUnknownSchema: return "UnknownSchema";
    case ErrorCode::kInvalidCredential: return "InvalidCredential";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace zkdid
