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

#include "zkdid/hashing.hpp"

#include <openssl/evp.h>

#include <string>

namespace zkdid {

namespace {

// An explicitly fetched digest skips the per-init provider lookup that the
// legacy EVP_sha256() handle goes through.
const EVP_MD* sha256_md() {
  static EVP_MD* md = EVP_MD_fetch(nullptr, "SHA2-256", nullptr);
  return md;
}

}  // namespace

struct Sha256::Impl {
  EVP_MD_CTX* ctx = nullptr;
};

Sha256::Sha256() : impl_(std::make_unique<Impl>()) {
  impl_->ctx = EVP_MD_CTX_new();
  if (impl_->ctx == nullptr || EVP_DigestInit_ex2(impl_->ctx, sha256_md(), nullptr) != 1) {
    throw std::runtime_error("EVP SHA-256 initialization failed");
  }
}

Sha256::~Sha256() { EVP_MD_CTX_free(impl_->ctx); }

Sha256& Sha256::update(std::span<const uint8_t> data) {
  EVP_DigestUpdate(impl_->ctx, data.data(), data.size());
  return *this;
}

Sha256& Sha256::update_u32(uint32_t v) {
  uint8_t b[4] = {static_cast<uint8_t>(v >> 24), static_cast<uint8_t>(v >> 16),
                  static_cast<uint8_t>(v >> 8), static_cast<uint8_t>(v)};
  return update(b);
}

Sha256& Sha256::update_u64(uint64_t v) {
  uint8_t b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<uint8_t>(v >> (56 - 8 * i));
  return update(b);
}

Digest32 Sha256::finish() {
  Digest32 out{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(impl_->ctx, out.data(), &len);
  EVP_DigestInit_ex2(impl_->ctx, sha256_md(), nullptr);
  return out;
}

Digest32 byte_hash(std::span<const uint8_t> data) {
  thread_local Sha256 hasher;
  return hasher.update(data).finish();
}

MimcParams::MimcParams(unsigned rounds) {
  constants_.reserve(rounds);
  for (unsigned i = 0; i < rounds; ++i) {
    if (i == 0) {
      constants_.push_back(Felt::zero());
      continue;
    }
    Digest32 d = byte_hash("zkdid/mimc/gl/" + std::to_string(i));
    constants_.push_back(Felt::from_bytes(d));
  }
}

const MimcParams& MimcParams::standard() {
  static const MimcParams params(kDefaultRounds);
  return params;
}

Felt mimc_perm(Felt x, Felt k, const MimcParams& params) {
  for (Felt c : params.constants()) x = pow7(x + k + c);
  return x;
}

Felt h2(Felt l, Felt r, const MimcParams& params) { return mimc_perm(l, r, params) + l + r; }

Felt commit_attributes(std::span<const uint32_t> attrs, Felt salt, const MimcParams& params) {
  if (attrs.empty()) throw Error(ErrorCode::kEmptyAttributes, "no attributes to commit");
  Felt acc = salt;
  for (uint32_t a : attrs) acc = h2(acc, Felt(a), params);
  return acc;
}

}  // namespace zkdid
