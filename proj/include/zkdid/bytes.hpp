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
#include <string>
#include <string_view>
#include <vector>

#include "zkdid/error.hpp"
#include "zkdid/field.hpp"

namespace zkdid {

using Bytes = std::vector<uint8_t>;

std::string to_hex(std::span<const uint8_t> bytes);
/// Throws ParseError on odd length or non-hex characters.
Bytes from_hex(std::string_view hex);

inline std::span<const uint8_t> as_bytes(std::string_view s) {
  return {reinterpret_cast<const uint8_t*>(s.data()), s.size()};
}

/// Big-endian append-only encoder used by every canonical encoding.
class ByteWriter {
 public:
  void u8(uint8_t v) { buf_.push_back(v); }
  void u16(uint16_t v) { be(v, 2); }
  void u32(uint32_t v) { be(v, 4); }
  void u64(uint64_t v) { be(v, 8); }
  void felt(Felt f) { u64(f.value()); }
  void raw(std::span<const uint8_t> b) { buf_.insert(buf_.end(), b.begin(), b.end()); }
  /// len4 || bytes
  void str(std::string_view s) {
    u32(static_cast<uint32_t>(s.size()));
    raw(as_bytes(s));
  }

  const Bytes& bytes() const& { return buf_; }
  Bytes take() && { return std::move(buf_); }
  size_t size() const { return buf_.size(); }

 private:
  void be(uint64_t v, int n) {
    for (int i = n - 1; i >= 0; --i) buf_.push_back(static_cast<uint8_t>(v >> (8 * i)));
  }

  Bytes buf_;
};

/// Bounds-checked reader; every failure throws DecodeError with the offset.
class ByteReader {
 public:
  explicit ByteReader(std::span<const uint8_t> data) : data_(data) {}

  uint8_t u8() { return static_cast<uint8_t>(be(1)); }
  uint16_t u16() { return static_cast<uint16_t>(be(2)); }
  uint32_t u32() { return static_cast<uint32_t>(be(4)); }
  uint64_t u64() { return be(8); }
  /// Rejects non-canonical encodings (value >= p).
  Felt felt() {
    size_t at = pos_;
    uint64_t v = be(8);
    if (v >= Felt::kModulus) throw DecodeError(at, "non-canonical field element");
    return Felt::from_canonical(v);
  }
  std::span<const uint8_t> raw(size_t n) {
    need(n);
    auto out = data_.subspan(pos_, n);
    pos_ += n;
    return out;
  }
  template <size_t N>
  std::array<uint8_t, N> fixed() {
    std::array<uint8_t, N> out{};
    auto s = raw(N);
    std::copy(s.begin(), s.end(), out.begin());
    return out;
  }
  std::string str(size_t max_len = 1 << 20) {
    size_t at = pos_;
    uint32_t n = u32();
    if (n > max_len) throw DecodeError(at, "string length out of range");
    auto s = raw(n);
    return std::string(s.begin(), s.end());
  }

  size_t offset() const { return pos_; }
  size_t remaining() const { return data_.size() - pos_; }
  bool done() const { return pos_ == data_.size(); }
  void expect_done() const {
    if (!done()) throw DecodeError(pos_, "trailing bytes");
  }
  [[noreturn]] void fail(const std::string& what) const { throw DecodeError(pos_, what); }

 private:
  void need(size_t n) const {
    if (n > remaining()) throw DecodeError(pos_, "truncated input");
  }
  uint64_t be(size_t n) {
    need(n);
    uint64_t v = 0;
    for (size_t i = 0; i < n; ++i) v = (v << 8) | data_[pos_ + i];
    pos_ += n;
    return v;
  }

  std::span<const uint8_t> data_;
  size_t pos_ = 0;
};

}  // namespace zkdid
