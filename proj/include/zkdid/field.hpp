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
#include <compare>
#include <cstdint>
#include <span>
#include <vector>

#include "zkdid/error.hpp"

namespace zkdid {

/// Element of the prime field p = 2^64 - 2^32 + 1, always held canonical.
class Felt {
 public:
  static constexpr uint64_t kModulus = 0xffffffff00000001ULL;
  /// 2^64 mod p.
  static constexpr uint64_t kEpsilon = 0xffffffffULL;
  static constexpr uint64_t kGenerator = 7;
  static constexpr unsigned kTwoAdicity = 32;

  constexpr Felt() = default;
  /// Reduces any 64-bit integer into the field.
  constexpr explicit Felt(uint64_t v) : value_(v >= kModulus ? v - kModulus : v) {}

  static constexpr Felt zero() { return Felt(); }
  static constexpr Felt one() { return Felt(1); }

  constexpr uint64_t value() const { return value_; }

  constexpr Felt operator+(Felt o) const {
    // value_ + o.value_ may wrap 2^64; 2^64 = kEpsilon (mod p).
    uint64_t sum = value_ + o.value_;
    bool carry = sum < value_;
    uint64_t r = sum;
    if (carry) r += kEpsilon;
    return Felt(r);
  }

  constexpr Felt operator-(Felt o) const {
    uint64_t diff = value_ - o.value_;
    if (value_ < o.value_) diff -= kEpsilon;
    return Felt::from_canonical(diff);
  }

  constexpr Felt operator-() const { return Felt() - *this; }

  constexpr Felt operator*(Felt o) const {
    return reduce128(static_cast<unsigned __int128>(value_) * o.value_);
  }

  Felt& operator+=(Felt o) { return *this = *this + o; }
  Felt& operator-=(Felt o) { return *this = *this - o; }
  Felt& operator*=(Felt o) { return *this = *this * o; }

  constexpr bool operator==(const Felt&) const = default;
  constexpr auto operator<=>(const Felt&) const = default;

  constexpr bool is_zero() const { return value_ == 0; }

  constexpr Felt square() const { return *this * *this; }

  /// a^e with 0^0 = 1.
  constexpr Felt pow(uint64_t e) const {
    Felt base = *this;
    Felt acc = one();
    while (e != 0) {
      if (e & 1) acc *= base;
      base = base.square();
      e >>= 1;
    }
    return acc;
  }

  /// Throws ZeroInverse for zero.
  Felt inverse() const;

  /// 8 bytes big-endian of the canonical value.
  std::array<uint8_t, 8> to_bytes() const;
  /// Reads 8 BE bytes; values >= p are reduced (use from_bytes_canonical to reject).
  static Felt from_bytes(std::span<const uint8_t> b);

  static constexpr Felt from_canonical(uint64_t v) {
    Felt f;
    f.value_ = v;
    return f;
  }

 private:
  static constexpr Felt reduce128(unsigned __int128 x) {
    uint64_t lo = static_cast<uint64_t>(x);
    uint64_t hi = static_cast<uint64_t>(x >> 64);
    uint64_t hi_hi = hi >> 32;
    uint64_t hi_lo = hi & kEpsilon;
    // x = lo + hi_lo * 2^64 + hi_hi * 2^96, with 2^96 = -1 (mod p).
    uint64_t t0 = lo - hi_hi;
    if (lo < hi_hi) t0 -= kEpsilon;
    uint64_t t1 = hi_lo * kEpsilon;
    uint64_t t2 = t0 + t1;
    if (t2 < t0) t2 += kEpsilon;
    return Felt(t2);
  }

  uint64_t value_ = 0;
};

/// Inverts every element in place with one field inversion. Throws
/// ZeroInverse if any element is zero.
void batch_inverse(std::span<Felt> values);

/// Primitive 2^k-th root of unity 7^((p-1)/2^k). Throws UnsupportedOrder for k > 32.
Felt root_of_unity(unsigned log_order);

/// A multiplicative coset offset * <generator> of size 2^log_size.
struct EvalDomain {
  unsigned log_size = 0;
  Felt offset = Felt::one();
  Felt generator = Felt::one();

  static EvalDomain subgroup(unsigned log_size);
  static EvalDomain coset(unsigned log_size, Felt offset);

  size_t size() const { return size_t{1} << log_size; }
  Felt element(size_t i) const { return offset * generator.pow(i); }
  /// Every element, in index order.
  std::vector<Felt> elements() const;
};

/// Evaluates the coefficient vector on every point of `domain`.
/// Throws SizeMismatch unless coeffs.size() == domain.size().
std::vector<Felt> ntt(std::span<const Felt> coeffs, const EvalDomain& domain);
/// Inverse of ntt.
std::vector<Felt> intt(std::span<const Felt> evals, const EvalDomain& domain);

/// Horner evaluation of a coefficient vector.
Felt eval_poly(std::span<const Felt> coeffs, Felt x);

/// Index of the highest nonzero coefficient plus one (0 for the zero polynomial).
size_t degree_bound(std::span<const Felt> coeffs);

}  // namespace zkdid
