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

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace zkdid {

/// Every failure the library reports. The CLI maps these 1:1 onto its
/// machine-parseable stderr codes, so the names are part of the interface.
enum class ErrorCode : uint8_t {
  // field
  kZeroInverse,
  kUnsupportedOrder,
  kSizeMismatch,
  // hashing / merkle
  kEmptyAttributes,
  kIndexOutOfRange,
  // air
  kPredicateUnsatisfied,
  kMembershipMismatch,
  kAttributeOutOfRange,
  kTraceTooShort,
  kColumnMismatch,
  // fri / stark
  kDomainTooSmall,
  kInternalDegreeOverflow,
  kDecodeError,
  kUnsupportedVersion,
  kInvalidParams,
  // accumulator
  kCapacityExhausted,
  kSlotNotOccupied,
  kUnknownEpoch,
  // identity
  kKeysExhausted,
  kInvalidDid,
  // vdr
  kBadSignature,
  kUnauthorized,
  kUnknownDid,
  kInvalidTransition,
  kEpochGap,
  kNotGuardian,
  kDuplicateApproval,
  kTimelockNotElapsed,
  kNoPendingRecovery,
  kReplayedSignature,
  kExpired,
  kAlreadyRegistered,
  // protocol
  kNoMatchingCredential,
  kRevoked,
  kStaleRootPolicy,
  kUnknownSchema,
  kInvalidCredential,
  // io
  kIoError,
  kParseError,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Malformed serialized input. Carries the byte offset where parsing failed.
class DecodeError : public Error {
 public:
  DecodeError(size_t offset, const std::string& what,
              ErrorCode code = ErrorCode::kDecodeError)
      : Error(code, what + " at offset " + std::to_string(offset)),
        offset_(offset) {}

  size_t offset() const noexcept { return offset_; }

 private:
  size_t offset_;
};

}  // namespace zkdid
