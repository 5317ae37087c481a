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

#include "zkdid/transcript.hpp"

#include "zkdid/error.hpp"

namespace zkdid {

Transcript::Transcript(std::string_view protocol_label) {
  Sha256 h;
  state_ = h.update("zkdid/fs/v1").update(protocol_label).finish();
}

void Transcript::absorb(std::string_view label, std::span<const uint8_t> data) {
  thread_local Sha256 h;
  state_ = h.update(state_)
               .update_u32(static_cast<uint32_t>(label.size()))
               .update(label)
               .update_u64(data.size())
               .update(data)
               .finish();
}

Digest32 Transcript::squeeze(std::string_view label) {
  thread_local Sha256 h;
  Digest32 d = h.update(state_).update_u64(counter_).update(label).finish();
  ++counter_;
  return d;
}

namespace {
uint64_t leading_u64(const Digest32& d) {
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | d[i];
  return v;
}
}  // namespace

Felt Transcript::challenge_felt(std::string_view label) { return Felt(leading_u64(squeeze(label))); }

std::vector<uint32_t> Transcript::challenge_indices(std::string_view label, size_t k,
                                                    uint64_t range_size) {
  if (range_size == 0) throw Error(ErrorCode::kIndexOutOfRange, "empty index range");
  std::vector<uint32_t> out;
  out.reserve(k);
  for (size_t i = 0; i < k; ++i) {
    out.push_back(static_cast<uint32_t>(leading_u64(squeeze(label)) % range_size));
  }
  return out;
}

}  // namespace zkdid
