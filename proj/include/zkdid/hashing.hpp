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

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "zkdid/bytes.hpp"
#include "zkdid/field.hpp"

namespace zkdid {

using Digest32 = std::array<uint8_t, 32>;

/// SHA-256 of `data`.
Digest32 byte_hash(std::span<const uint8_t> data);
inline Digest32 byte_hash(std::string_view s) { return byte_hash(as_bytes(s)); }

/// Streaming SHA-256 for hashing concatenations without building them.
class Sha256 {
 public:
  Sha256();
  ~Sha256();
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  Sha256& update(std::span<const uint8_t> data);
  Sha256& update(std::string_view s) { return update(as_bytes(s)); }
  Sha256& update_u8(uint8_t v) { return update(std::span<const uint8_t>(&v, 1)); }
  Sha256& update_u32(uint32_t v);
  Sha256& update_u64(uint64_t v);
  Digest32 finish();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// MiMC over the Goldilocks field with x^7 rounds. Only the round count is
/// configurable; constants come from a fixed label so every build agrees.
/// Not a security-audited parameterization.
class MimcParams {
 public:
  static constexpr unsigned kDefaultRounds = 64;
  static constexpr unsigned kExponent = 7;

  explicit MimcParams(unsigned rounds = kDefaultRounds);

  /// Shared instance for the default 64-round permutation.
  static const MimcParams& standard();

  unsigned rounds() const { return static_cast<unsigned>(constants_.size()); }
  /// c_0 = 0; c_i = first 8 BE bytes of SHA-256("zkdid/mimc/gl/<i>") mod p.
  const std::vector<Felt>& constants() const { return constants_; }

  bool operator==(const MimcParams& o) const { return constants_ == o.constants_; }

 private:
  std::vector<Felt> constants_;
};

inline Felt pow7(Felt x) {
  Felt x2 = x.square();
  Felt x3 = x2 * x;
  return x3.square() * x;
}

/// rounds of x <- (x + k + c_i)^7.
Felt mimc_perm(Felt x, Felt k, const MimcParams& params = MimcParams::standard());

/// 2-to-1 compression: mimc_perm(l, r) + l + r.
Felt h2(Felt l, Felt r, const MimcParams& params = MimcParams::standard());

/// Folds attributes into a salted commitment: acc = salt; acc = h2(acc, a_i).
/// Throws EmptyAttributes for an empty list.
Felt commit_attributes(std::span<const uint32_t> attrs, Felt salt,
                       const MimcParams& params = MimcParams::standard());

}  // namespace zkdid
