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

#include "zkdid/merkle.hpp"

#include <bit>
#include <string>

namespace zkdid {

Digest32 byte_leaf_hash(const Salt& salt, std::span<const uint8_t> leaf) {
  thread_local Bytes buf;
  buf.clear();
  buf.push_back(0x00);
  buf.insert(buf.end(), salt.begin(), salt.end());
  buf.insert(buf.end(), leaf.begin(), leaf.end());
  return byte_hash(buf);
}

Digest32 byte_node_hash(const Digest32& left, const Digest32& right) {
  std::array<uint8_t, 65> buf{};
  buf[0] = 0x01;
  std::copy(left.begin(), left.end(), buf.begin() + 1);
  std::copy(right.begin(), right.end(), buf.begin() + 33);
  return byte_hash(buf);
}

size_t ByteMerkleTree::padded_size(size_t n) { return std::bit_ceil(std::max<size_t>(n, 1)); }

ByteMerkleTree::ByteMerkleTree(std::vector<Bytes> leaves, std::vector<Salt> salts)
    : leaves_(std::move(leaves)), salts_(std::move(salts)) {
  if (leaves_.empty()) throw Error(ErrorCode::kIndexOutOfRange, "merkle tree needs a leaf");
  const size_t n = padded_size(leaves_.size());
  leaves_.resize(n);
  if (salts_.size() != n) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "expected " + std::to_string(n) + " salts, got " + std::to_string(salts_.size()));
  }
  depth_ = static_cast<unsigned>(std::countr_zero(n));
  nodes_.resize(2 * n);
  for (size_t i = 0; i < n; ++i) nodes_[n + i] = byte_leaf_hash(salts_[i], leaves_[i]);
  for (size_t i = n; i-- > 1;) nodes_[i] = byte_node_hash(nodes_[2 * i], nodes_[2 * i + 1]);
}

ByteMerkleTree ByteMerkleTree::build(std::vector<Bytes> leaves, Rng& rng) {
  std::vector<Salt> salts(padded_size(leaves.size()));
  for (auto& s : salts) rng.fill(s);
  return ByteMerkleTree(std::move(leaves), std::move(salts));
}

BytePath ByteMerkleTree::open(size_t i) const {
  if (i >= leaves_.size()) {
    throw Error(ErrorCode::kIndexOutOfRange, "leaf " + std::to_string(i) + " of " +
                                                 std::to_string(leaves_.size()));
  }
  BytePath path;
  path.index = static_cast<uint32_t>(i);
  path.salt = salts_[i];
  for (size_t node = leaves_.size() + i; node > 1; node >>= 1) path.siblings.push_back(nodes_[node ^ 1]);
  return path;
}

bool byte_verify(const Digest32& root, std::span<const uint8_t> leaf, const BytePath& path) {
  return byte_verify_at(root, leaf, path.index, path);
}

bool byte_verify_at(const Digest32& root, std::span<const uint8_t> leaf, uint32_t index, const BytePath& path) {
  if (path.siblings.size() < 32 && (uint64_t{index} >> path.siblings.size()) != 0) return false;
  Digest32 acc = byte_leaf_hash(path.salt, leaf);
  for (size_t j = 0; j < path.siblings.size(); ++j) {
    acc = ((index >> j) & 1) ? byte_node_hash(path.siblings[j], acc) : byte_node_hash(acc, path.siblings[j]);
  }
  return acc == root;
}

void encode_byte_path(ByteWriter& w, const BytePath& path) {
  w.u32(path.index);
  w.raw(path.salt);
  for (const auto& s : path.siblings) w.raw(s);
}

BytePath decode_byte_path(ByteReader& r, unsigned depth) {
  BytePath path;
  path.index = r.u32();
  path.salt = r.fixed<16>();
  path.siblings.reserve(depth);
  for (unsigned j = 0; j < depth; ++j) path.siblings.push_back(r.fixed<32>());
  return path;
}

void encode_unindexed_path(ByteWriter& w, const BytePath& path) {
  w.raw(path.salt);
  for (const auto& s : path.siblings) w.raw(s);
}

BytePath decode_unindexed_path(ByteReader& r, unsigned depth) {
  BytePath path;
  path.salt = r.fixed<16>();
  path.siblings.reserve(depth);
  for (unsigned j = 0; j < depth; ++j) path.siblings.push_back(r.fixed<32>());
  return path;
}

std::vector<Felt> zero_subtree_roots(unsigned depth, const MimcParams& params) {
  std::vector<Felt> z(depth + 1);
  for (unsigned j = 0; j < depth; ++j) z[j + 1] = h2(z[j], z[j], params);
  return z;
}

namespace {

void check_leaf_count(std::span<const Felt> leaves, unsigned depth) {
  if (depth >= 32 || leaves.size() != (size_t{1} << depth)) {
    throw Error(ErrorCode::kSizeMismatch, "h2 tree of depth " + std::to_string(depth) +
                                              " needs 2^depth leaves, got " +
                                              std::to_string(leaves.size()));
  }
}

}  // namespace

Felt alg_root(std::span<const Felt> leaves, unsigned depth, const MimcParams& params) {
  check_leaf_count(leaves, depth);
  std::vector<Felt> level(leaves.begin(), leaves.end());
  while (level.size() > 1) {
    std::vector<Felt> next(level.size() / 2);
    for (size_t i = 0; i < next.size(); ++i) next[i] = h2(level[2 * i], level[2 * i + 1], params);
    level = std::move(next);
  }
  return level[0];
}

AlgPath alg_open(std::span<const Felt> leaves, uint32_t index, unsigned depth, const MimcParams& params) {
  check_leaf_count(leaves, depth);
  if (index >= leaves.size()) {
    throw Error(ErrorCode::kIndexOutOfRange, "slot " + std::to_string(index) + " outside tree");
  }
  AlgPath path;
  path.index = index;
  std::vector<Felt> level(leaves.begin(), leaves.end());
  size_t pos = index;
  while (level.size() > 1) {
    path.siblings.push_back(level[pos ^ 1]);
    std::vector<Felt> next(level.size() / 2);
    for (size_t i = 0; i < next.size(); ++i) next[i] = h2(level[2 * i], level[2 * i + 1], params);
    level = std::move(next);
    pos >>= 1;
  }
  return path;
}

Felt alg_path_root(Felt leaf, const AlgPath& path, const MimcParams& params) {
  Felt acc = leaf;
  for (unsigned j = 0; j < path.depth(); ++j) {
    acc = path.direction(j) ? h2(path.siblings[j], acc, params) : h2(acc, path.siblings[j], params);
  }
  return acc;
}

bool alg_verify(Felt root, Felt leaf, const AlgPath& path, const MimcParams& params) {
  if (path.depth() < 32 && (uint64_t{path.index} >> path.depth()) != 0) return false;
  return alg_path_root(leaf, path, params) == root;
}

void encode_alg_path(ByteWriter& w, const AlgPath& path) {
  w.u32(path.index);
  for (Felt s : path.siblings) w.felt(s);
}

AlgPath decode_alg_path(ByteReader& r, unsigned depth) {
  AlgPath path;
  path.index = r.u32();
  for (unsigned j = 0; j < depth; ++j) path.siblings.push_back(r.felt());
  return path;
}

}  // namespace zkdid
