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
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "zkdid/bytes.hpp"
#include "zkdid/field.hpp"
#include "zkdid/hashing.hpp"
#include "zkdid/merkle.hpp"

namespace zkdid {

using Seed32 = std::array<uint8_t, 32>;

/// did:zkd:<64 lowercase hex>. The id is byte_hash of the initial key-tree root.
struct Did {
  Digest32 id{};

  static Did from_key_root(const Digest32& initial_root);
  /// Throws InvalidDid.
  static Did parse(std::string_view text);
  std::string render() const;

  bool operator==(const Did&) const = default;
  auto operator<=>(const Did&) const = default;
};

/// Lamport signature plus the key-tree path of the one-time key used.
/// reveals[2j] is the preimage for digest bit j, reveals[2j+1] the public
/// hash for the other bit value.
struct HashSig {
  static constexpr size_t kBits = 256;

  uint32_t index = 0;
  std::vector<Digest32> reveals;
  BytePath auth_path;

  bool operator==(const HashSig&) const = default;
};

/// s[i][j][b] = byte_hash(seed || i (4) || j (2) || b (1)).
Digest32 ots_secret(const Seed32& seed, uint32_t i, uint16_t j, uint8_t b);
/// byte_hash over the 512 public hashes, ordered j-major then b.
Digest32 ots_leaf(const Seed32& seed, uint32_t i);

/// Stateful many-time signer: 2^height Lamport keys under a ByteMerkleTree
/// with all-zero leaf salts. Not thread-safe; callers serialize signing.
class KeyTree {
 public:
  static constexpr unsigned kDefaultHeight = 10;

  explicit KeyTree(const Seed32& seed, unsigned height = kDefaultHeight, uint32_t next_index = 0);

  const Digest32& root() const { return tree_.root(); }
  unsigned height() const { return height_; }
  uint32_t next_index() const { return next_; }
  uint64_t capacity() const { return uint64_t{1} << height_; }
  const Seed32& seed() const { return seed_; }

  /// Uses key next_index() and advances it. Throws KeysExhausted.
  HashSig sign(std::span<const uint8_t> msg);

 private:
  Seed32 seed_;
  unsigned height_;
  uint32_t next_;
  ByteMerkleTree tree_;
};

/// Never throws.
bool verify_sig(const Digest32& root, std::span<const uint8_t> msg, const HashSig& sig);

/// index || height (1) || 512 digests || auth path.
void encode_sig(ByteWriter& w, const HashSig& sig);
HashSig decode_sig(ByteReader& r);

struct DidDocument {
  Did did;
  Digest32 active_key_root{};
  std::vector<Did> guardians;
  uint8_t threshold = 0;
  uint64_t updated_at = 0;

  /// threshold <= |guardians|, threshold >= 1 when guardians exist, no duplicates.
  bool well_formed() const;

  bool operator==(const DidDocument&) const = default;
};

struct Attribute {
  std::string name;
  uint32_t value = 0;

  bool operator==(const Attribute&) const = default;
};

using CredentialId = std::array<uint8_t, 16>;

struct Credential {
  CredentialId id{};
  Did issuer;
  Did subject;
  std::string schema;
  std::vector<Attribute> attributes;
  Felt salt;
  uint32_t slot = 0;
  uint64_t issued_epoch = 0;
  HashSig signature;

  std::vector<uint32_t> values() const;
  /// Position of `name` among the attributes.
  std::optional<size_t> attribute_index(std::string_view name) const;
  /// commit_attributes over the values, in order.
  Felt commitment(const MimcParams& params = MimcParams::standard()) const;

  bool operator==(const Credential&) const = default;
};

/// Tag 0x01; every field except the signature. This is the signed message.
Bytes canonical_encode_body(const Credential& c);
/// Body followed by the signature.
Bytes canonical_encode(const Credential& c);
/// Tag 0x03.
Bytes canonical_encode(const DidDocument& d);

/// Strict decoders; throw DecodeError.
Credential decode_credential(std::span<const uint8_t> bytes);
DidDocument decode_document(std::span<const uint8_t> bytes);

}  // namespace zkdid
