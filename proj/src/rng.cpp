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

#include "zkdid/rng.hpp"

#include <algorithm>
#include <random>

namespace zkdid {

Rng::Rng(uint64_t seed) {
  Sha256 h;
  key_ = h.update("zkdid/rng/u64").update_u64(seed).finish();
}

Rng::Rng(std::span<const uint8_t> seed) {
  Sha256 h;
  key_ = h.update("zkdid/rng/bytes").update(seed).finish();
}

Rng Rng::from_system() {
  std::random_device rd;
  std::array<uint8_t, 32> seed{};
  for (size_t i = 0; i < seed.size(); i += 4) {
    uint32_t v = rd();
    for (size_t j = 0; j < 4; ++j) seed[i + j] = static_cast<uint8_t>(v >> (8 * j));
  }
  return Rng(std::span<const uint8_t>(seed));
}

Rng Rng::derive(std::string_view label) const {
  Sha256 h;
  Digest32 child = h.update(key_).update(label).finish();
  return Rng(std::span<const uint8_t>(child));
}

void Rng::fill(std::span<uint8_t> out) {
  for (auto& b : out) {
    if (used_ == block_.size()) {
      std::array<uint8_t, 40> in{};
      std::copy(key_.begin(), key_.end(), in.begin());
      for (int i = 0; i < 8; ++i) in[32 + i] = static_cast<uint8_t>(counter_ >> (56 - 8 * i));
      ++counter_;
      block_ = byte_hash(in);
      used_ = 0;
    }
    b = block_[used_++];
  }
}

uint64_t Rng::next_u64() {
  std::array<uint8_t, 8> b{};
  fill(b);
  uint64_t v = 0;
  for (uint8_t x : b) v = (v << 8) | x;
  return v;
}

uint64_t Rng::uniform(uint64_t bound) {
  const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  for (;;) {
    uint64_t v = next_u64();
    if (v < limit) return v % bound;
  }
}

Felt Rng::next_felt() {
  for (;;) {
    uint64_t v = next_u64();
    if (v < Felt::kModulus) return Felt::from_canonical(v);
  }
}

}  // namespace zkdid
