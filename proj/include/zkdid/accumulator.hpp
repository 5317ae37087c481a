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
#include <map>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "zkdid/air.hpp"
#include "zkdid/field.hpp"
#include "zkdid/hashing.hpp"
#include "zkdid/merkle.hpp"

namespace zkdid {

struct MembershipWitness {
  uint32_t slot = 0;
  AlgPath path;
  uint64_t epoch = 0;

  bool operator==(const MembershipWitness&) const = default;
};

struct EpochRoot {
  uint64_t epoch = 0;
  Felt root;

  bool operator==(const EpochRoot&) const = default;
};

/// Issuer-side sparse h2 tree over credential commitments. Every mutation
/// bumps the epoch by one and records the new root. Slots are handed out in
/// increasing order and never reused, even after revocation.
///
/// Mutators take an exclusive lock, readers a shared one, so concurrent
/// readers always see a consistent (epoch, root, leaves) state.
class Accumulator {
 public:
  explicit Accumulator(unsigned depth = 16, unsigned mimc_rounds = MimcParams::kDefaultRounds);
  static Accumulator for_config(const AirConfig& config) {
    return Accumulator(config.tree_depth, config.mimc_rounds);
  }

  Accumulator(const Accumulator& other);
  Accumulator& operator=(const Accumulator& other);

  unsigned depth() const { return depth_; }
  const MimcParams& mimc() const { return mimc_; }
  uint64_t capacity() const { return uint64_t{1} << depth_; }

  uint64_t epoch() const;
  Felt root() const;
  /// Throws UnknownEpoch.
  Felt root_at(uint64_t epoch) const;
  std::vector<EpochRoot> history() const;
  std::map<uint32_t, Felt> occupied() const;
  bool is_occupied(uint32_t slot) const;
  /// Slots handed out so far, including revoked ones.
  uint64_t slots_used() const;

  /// Returns the slot. Throws CapacityExhausted.
  uint32_t add(Felt commitment);
  /// Returns the new epoch. Throws SlotNotOccupied.
  uint64_t revoke(uint32_t slot);

  /// Throws SlotNotOccupied.
  MembershipWitness witness(uint32_t slot) const;
  /// Current-epoch witness for the same slot. Throws SlotNotOccupied.
  MembershipWitness refresh(const MembershipWitness& stale) const;

  /// Text form: header (depth, rounds, epoch, next slot), occupied slots, history.
  std::string serialize() const;
  /// Throws ParseError, including when the stored root disagrees with the leaves.
  static Accumulator deserialize(const std::string& text);
  /// Throws IoError / ParseError.
  void save(const std::string& path) const;
  static Accumulator load(const std::string& path);

 private:
  Felt node(unsigned level, uint64_t index) const;
  void set_leaf(uint32_t slot, Felt value);
  MembershipWitness witness_locked(uint32_t slot) const;

  unsigned depth_;
  MimcParams mimc_;
  std::vector<Felt> zeros_;
  // levels_[0] holds leaves; only nodes that differ from the empty subtree are stored.
  std::vector<std::unordered_map<uint64_t, Felt>> levels_;
  std::map<uint32_t, Felt> occupied_;
  uint64_t next_slot_ = 0;
  std::vector<EpochRoot> history_;
  mutable std::shared_mutex mu_;
};

}  // namespace zkdid
