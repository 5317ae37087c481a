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
#include <span>
#include <string_view>

#include "zkdid/bytes.hpp"
#include "zkdid/field.hpp"
#include "zkdid/hashing.hpp"

namespace zkdid {

/// Deterministic byte generator: block i = SHA-256(key || i). Every random
/// choice in the library (salts, nonces, padding rows) draws from one of
/// these, so a fixed seed reproduces every artifact bit for bit.
class Rng {
 public:
  explicit Rng(uint64_t seed);
  explicit Rng(std::span<const uint8_t> seed);
  /// Seeded from std::random_device.
  static Rng from_system();

  /// Independent child stream keyed by (this stream's key, label).
  Rng derive(std::string_view label) const;

  void fill(std::span<uint8_t> out);
  uint64_t next_u64();
  /// Uniform below `bound` (rejection sampled). bound must be > 0.
  uint64_t uniform(uint64_t bound);
  Felt next_felt();
  template <size_t N>
  std::array<uint8_t, N> next_array() {
    std::array<uint8_t, N> out{};
    fill(out);
    return out;
  }

 private:
  Digest32 key_{};
  uint64_t counter_ = 0;
  Digest32 block_{};
  size_t used_ = 32;
};

}  // namespace zkdid
