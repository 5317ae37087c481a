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

#include "zkdid/identity.hpp"

#include <algorithm>
#include <set>

#include "zkdid/error.hpp"

namespace zkdid {

namespace {

constexpr std::string_view kDidPrefix = "did:zkd:";
constexpr uint8_t kTagCredential = 0x01;
constexpr uint8_t kTagDocument = 0x03;
constexpr size_t kMaxKeyHeight = 20;
constexpr uint32_t kMaxListLength = 1 << 16;

bool digest_bit(const Digest32& d, size_t j) { return (d[j / 8] >> (7 - j % 8)) & 1; }

Digest32 hash_digest(const Digest32& d) { return byte_hash(d); }

void write_credential_body(ByteWriter& w, const Credential& c) {
  w.u8(kTagCredential);
  w.raw(c.id);
  w.raw(c.issuer.id);
  w.raw(c.subject.id);
  w.str(c.schema);
  w.u32(static_cast<uint32_t>(c.attributes.size()));
  for (const Attribute& a : c.attributes) {
    w.str(a.name);
    w.u32(a.value);
  }
  w.felt(c.salt);
  w.u32(c.slot);
  w.u64(c.issued_epoch);
}

}  // namespace

Did Did::from_key_root(const Digest32& initial_root) { return Did{byte_hash(initial_root)}; }

Did Did::parse(std::string_view text) {
  if (!text.starts_with(kDidPrefix) || text.size() != kDidPrefix.size() + 64) {
    throw Error(ErrorCode::kInvalidDid, "not a did:zkd identifier: " + std::string(text));
  }
  std::string_view hex = text.substr(kDidPrefix.size());
  if (!std::all_of(hex.begin(), hex.end(), [](char ch) { return (ch >= '0' && ch <= '9') || (ch >= 'a' && ch <= 'f'); })) {
    throw Error(ErrorCode::kInvalidDid, "did id must be lowercase hex");
  }
  Did d;
  Bytes raw = from_hex(hex);
  std::copy(raw.begin(), raw.end(), d.id.begin());
  return d;
}

std::string Did::render() const { return std::string(kDidPrefix) + to_hex(id); }

Digest32 ots_secret(const Seed32& seed, uint32_t i, uint16_t j, uint8_t b) {
  std::array<uint8_t, 39> buf{};
  std::copy(seed.begin(), seed.end(), buf.begin());
  buf[32] = static_cast<uint8_t>(i >> 24);
  buf[33] = static_cast<uint8_t>(i >> 16);
  buf[34] = static_cast<uint8_t>(i >> 8);
  buf[35] = static_cast<uint8_t>(i);
  buf[36] = static_cast<uint8_t>(j >> 8);
  buf[37] = static_cast<uint8_t>(j);
  buf[38] = b;
  return byte_hash(buf);
}

Digest32 ots_leaf(const Seed32& seed, uint32_t i) {
  Sha256 h;
  for (uint16_t j = 0; j < HashSig::kBits; ++j) {
    for (uint8_t b = 0; b < 2; ++b) h.update(hash_digest(ots_secret(seed, i, j, b)));
  }
  return h.finish();
}

namespace {

ByteMerkleTree build_key_tree(const Seed32& seed, unsigned height) {
  if (height == 0 || height > kMaxKeyHeight) {
    throw Error(ErrorCode::kInvalidParams, "key tree height must be in [1, 20]");
  }
  const size_t n = size_t{1} << height;
  std::vector<Bytes> leaves(n);
  for (size_t i = 0; i < n; ++i) {
    Digest32 leaf = ots_leaf(seed, static_cast<uint32_t>(i));
    leaves[i].assign(leaf.begin(), leaf.end());
  }
  return ByteMerkleTree(std::move(leaves), std::vector<Salt>(n));
}

}  // namespace

KeyTree::KeyTree(const Seed32& seed, unsigned height, uint32_t next_index)
    : seed_(seed),
      height_(height),
      next_(next_index),
      tree_(build_key_tree(seed, height)) {
  if (next_index > capacity()) throw Error(ErrorCode::kInvalidParams, "next key index beyond capacity");
}

HashSig KeyTree::sign(std::span<const uint8_t> msg) {
  if (next_ >= capacity()) {
    throw Error(ErrorCode::kKeysExhausted, "all " + std::to_string(capacity()) + " one-time keys used");
  }
  const uint32_t i = next_++;
  const Digest32 digest = byte_hash(msg);
  HashSig sig;
  sig.index = i;
  sig.reveals.reserve(2 * HashSig::kBits);
  for (uint16_t j = 0; j < HashSig::kBits; ++j) {
    const uint8_t bit = digest_bit(digest, j);
    sig.reveals.push_back(ots_secret(seed_, i, j, bit));
    sig.reveals.push_back(hash_digest(ots_secret(seed_, i, j, 1 - bit)));
  }
  sig.auth_path = tree_.open(i);
  return sig;
}

bool verify_sig(const Digest32& root, std::span<const uint8_t> msg, const HashSig& sig) {
  if (sig.reveals.size() != 2 * HashSig::kBits || sig.auth_path.index != sig.index) return false;
  const Digest32 digest = byte_hash(msg);
  Sha256 h;
  for (size_t j = 0; j < HashSig::kBits; ++j) {
    const Digest32 revealed = hash_digest(sig.reveals[2 * j]);
    const Digest32& other = sig.reveals[2 * j + 1];
    if (digest_bit(digest, j)) {
      h.update(other);
      h.update(revealed);
    } else {
      h.update(revealed);
      h.update(other);
    }
  }
  const Digest32 leaf = h.finish();
  const Salt zero{};
  if (sig.auth_path.salt != zero) return false;
  return byte_verify(root, leaf, sig.auth_path);
}

void encode_sig(ByteWriter& w, const HashSig& sig) {
  w.u32(sig.index);
  w.u8(static_cast<uint8_t>(sig.auth_path.siblings.size()));
  for (const Digest32& d : sig.reveals) w.raw(d);
  encode_byte_path(w, sig.auth_path);
}

HashSig decode_sig(ByteReader& r) {
  HashSig sig;
  sig.index = r.u32();
  const size_t at = r.offset();
  const uint8_t height = r.u8();
  if (height == 0 || height > kMaxKeyHeight) throw DecodeError(at, "bad key tree height");
  for (size_t k = 0; k < 2 * HashSig::kBits; ++k) sig.reveals.push_back(r.fixed<32>());
  sig.auth_path = decode_byte_path(r, height);
  if (sig.auth_path.index != sig.index) throw DecodeError(r.offset(), "signature index disagrees with its path");
  return sig;
}

bool DidDocument::well_formed() const {
  if (threshold > guardians.size()) return false;
  if (!guardians.empty() && threshold == 0) return false;
  std::set<Did> unique(guardians.begin(), guardians.end());
  return unique.size() == guardians.size();
}

std::vector<uint32_t> Credential::values() const {
  std::vector<uint32_t> out;
  for (const Attribute& a : attributes) out.push_back(a.value);
  return out;
}

std::optional<size_t> Credential::attribute_index(std::string_view name) const {
  for (size_t i = 0; i < attributes.size(); ++i) {
    if (attributes[i].name == name) return i;
  }
  return std::nullopt;
}

Felt Credential::commitment(const MimcParams& params) const { return commit_attributes(values(), salt, params); }

Bytes canonical_encode_body(const Credential& c) {
  ByteWriter w;
  write_credential_body(w, c);
  return std::move(w).take();
}

Bytes canonical_encode(const Credential& c) {
  ByteWriter w;
  write_credential_body(w, c);
  encode_sig(w, c.signature);
  return std::move(w).take();
}

Bytes canonical_encode(const DidDocument& d) {
  ByteWriter w;
  w.u8(kTagDocument);
  w.raw(d.did.id);
  w.raw(d.active_key_root);
  w.u32(static_cast<uint32_t>(d.guardians.size()));
  for (const Did& g : d.guardians) w.raw(g.id);
  w.u8(d.threshold);
  w.u64(d.updated_at);
  return std::move(w).take();
}

Credential decode_credential(std::span<const uint8_t> bytes) {
  ByteReader r(bytes);
  if (r.u8() != kTagCredential) throw DecodeError(0, "not a credential");
  Credential c;
  c.id = r.fixed<16>();
  c.issuer.id = r.fixed<32>();
  c.subject.id = r.fixed<32>();
  c.schema = r.str(256);
  const size_t at = r.offset();
  const uint32_t n = r.u32();
  if (n > kMaxListLength) throw DecodeError(at, "attribute list too long");
  for (uint32_t i = 0; i < n; ++i) {
    Attribute a;
    a.name = r.str(256);
    a.value = r.u32();
    c.attributes.push_back(std::move(a));
  }
  c.salt = r.felt();
  c.slot = r.u32();
  c.issued_epoch = r.u64();
  c.signature = decode_sig(r);
  r.expect_done();
  return c;
}

DidDocument decode_document(std::span<const uint8_t> bytes) {
  ByteReader r(bytes);
  if (r.u8() != kTagDocument) throw DecodeError(0, "not a DID document");
  DidDocument d;
  d.did.id = r.fixed<32>();
  d.active_key_root = r.fixed<32>();
  const size_t at = r.offset();
  const uint32_t n = r.u32();
  if (n > 255) throw DecodeError(at, "too many guardians");
  for (uint32_t i = 0; i < n; ++i) d.guardians.push_back(Did{r.fixed<32>()});
  d.threshold = r.u8();
  d.updated_at = r.u64();
  r.expect_done();
  if (!d.well_formed()) throw DecodeError(at, "guardian threshold out of range");
  return d;
}

}  // namespace zkdid
