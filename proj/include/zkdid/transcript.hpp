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
#include <span>
#include <string_view>
#include <vector>

#include "zkdid/field.hpp"
#include "zkdid/hashing.hpp"

namespace zkdid {

/// Fiat-Shamir hash chain. Absorbs are length-framed; squeezes hash
/// (state || counter || label) and never touch the absorbed state.
///
/// Challenges are 8 bytes reduced mod p (or mod the index range), so they
/// carry a modulo bias below 2^-32.
class Transcript {
 public:
  /// state = SHA-256("zkdid/fs/v1" || protocol_label)
  explicit Transcript(std::string_view protocol_label);

  /// state = SHA-256(state || len(label)_4 || label || len(data)_8 || data)
  void absorb(std::string_view label, std::span<const uint8_t> data);
  void absorb_felt(std::string_view label, Felt f) { absorb(label, f.to_bytes()); }
  void absorb_digest(std::string_view label, const Digest32& d) { absorb(label, d); }

  Digest32 squeeze(std::string_view label);
  Felt challenge_felt(std::string_view label);
  /// k squeezes, each reduced mod range_size; duplicates are kept.
  std::vector<uint32_t> challenge_indices(std::string_view label, size_t k, uint64_t range_size);

  const Digest32& state() const { return state_; }
  uint64_t counter() const { return counter_; }

  bool operator==(const Transcript&) const = default;

 private:
  Digest32 state_{};
  uint64_t counter_ = 0;
};

}  // namespace zkdid
