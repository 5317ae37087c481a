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
#include <vector>

#include "zkdid/bytes.hpp"
#include "zkdid/field.hpp"
#include "zkdid/hashing.hpp"
#include "zkdid/rng.hpp"

namespace zkdid {

using Salt = std::array<uint8_t, 16>;

/// Authentication path in a ByteMerkleTree. Siblings are bottom-up.
struct BytePath {
  uint32_t index = 0;
  Salt salt{};
  std::vector<Digest32> siblings;

  bool operator==(const BytePath&) const = default;
};

/// Merkle tree over byte-string leaves with a 16-byte salt per leaf.
/// leaf node = H(0x00 || salt || leaf), inner node = H(0x01 || left || right).
/// Immutable after construction.
class ByteMerkleTree {
 public:
  /// Pads to a power of two with empty leaves. Throws IndexOutOfRange when
  /// `leaves` is empty or salts.size() differs from the padded leaf count.
  ByteMerkleTree(std::vector<Bytes> leaves, std::vector<Salt> salts);

  /// Salts drawn from `rng`, one per padded leaf.
  static ByteMerkleTree build(std::vector<Bytes> leaves, Rng& rng);

  const Digest32& root() const { return nodes_[1]; }
  size_t leaf_count() const { return leaves_.size(); }
  unsigned depth() const { return depth_; }
  const Bytes& leaf(size_t i) const { return leaves_.at(i); }

  /// Throws IndexOutOfRange for i >= leaf_count().
  BytePath open(size_t i) const;

  static size_t padded_size(size_t n);

 private:
  std::vector<Bytes> leaves_;
  std::vector<Salt> salts_;
  // Heap layout: node 1 is the root, leaves occupy [n, 2n).
  std::vector<Digest32> nodes_;
  unsigned depth_ = 0;
};

Digest32 byte_leaf_hash(const Salt& salt, std::span<const uint8_t> leaf);
Digest32 byte_node_hash(const Digest32& left, const Digest32& right);

/// Recomputes the root from (leaf, path) and compares.
bool byte_verify(const Digest32& root, std::span<const uint8_t> leaf, const BytePath& path);

/// Same check with the position supplied by the caller; path.index is ignored.
bool byte_verify_at(const Digest32& root, std::span<const uint8_t> leaf, uint32_t index, const BytePath& path);

/// index (4 BE) || salt || siblings.
void encode_byte_path(ByteWriter& w, const BytePath& path);
BytePath decode_byte_path(ByteReader& r, unsigned depth);
/// salt || siblings, for contexts where the position is implied. Decodes with index 0.
void encode_unindexed_path(ByteWriter& w, const BytePath& path);
BytePath decode_unindexed_path(ByteReader& r, unsigned depth);

/// Authentication path in an h2 tree. Bit j of `index` is the direction at
/// level j: 0 means the running node is the left operand.
struct AlgPath {
  uint32_t index = 0;
  std::vector<Felt> siblings;

  unsigned depth() const { return static_cast<unsigned>(siblings.size()); }
  bool direction(unsigned level) const { return (index >> level) & 1; }

  bool operator==(const AlgPath&) const = default;
};

/// Z_0 = 0, Z_{j+1} = h2(Z_j, Z_j) for j < depth; returns depth + 1 entries.
std::vector<Felt> zero_subtree_roots(unsigned depth, const MimcParams& params = MimcParams::standard());

/// Root of the h2 tree over exactly 2^depth leaves. Throws SizeMismatch otherwise.
Felt alg_root(std::span<const Felt> leaves, unsigned depth,
              const MimcParams& params = MimcParams::standard());
/// Throws SizeMismatch / IndexOutOfRange.
AlgPath alg_open(std::span<const Felt> leaves, uint32_t index, unsigned depth,
                 const MimcParams& params = MimcParams::standard());
bool alg_verify(Felt root, Felt leaf, const AlgPath& path,
                const MimcParams& params = MimcParams::standard());
/// Root implied by (leaf, path).
Felt alg_path_root(Felt leaf, const AlgPath& path, const MimcParams& params = MimcParams::standard());

void encode_alg_path(ByteWriter& w, const AlgPath& path);
AlgPath decode_alg_path(ByteReader& r, unsigned depth);

}  // namespace zkdid
