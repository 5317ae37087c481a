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

#include "zkdid/field.hpp"

#include <string>
#include <utility>

namespace zkdid {

Felt Felt::inverse() const {
  if (is_zero()) throw Error(ErrorCode::kZeroInverse, "inverse of zero");
  return pow(kModulus - 2);
}

std::array<uint8_t, 8> Felt::to_bytes() const {
  std::array<uint8_t, 8> out{};
  for (int i = 0; i < 8; ++i) out[i] = static_cast<uint8_t>(value_ >> (56 - 8 * i));
  return out;
}

Felt Felt::from_bytes(std::span<const uint8_t> b) {
  uint64_t v = 0;
  for (size_t i = 0; i < 8; ++i) v = (v << 8) | b[i];
  return Felt(v);
}

void batch_inverse(std::span<Felt> values) {
  if (values.empty()) return;
  std::vector<Felt> prefix(values.size());
  Felt acc = Felt::one();
  for (size_t i = 0; i < values.size(); ++i) {
    if (values[i].is_zero()) {
      throw Error(ErrorCode::kZeroInverse, "batch inverse hit zero at " + std::to_string(i));
    }
    prefix[i] = acc;
    acc *= values[i];
  }
  Felt inv = acc.inverse();
  for (size_t i = values.size(); i-- > 0;) {
    Felt v = values[i];
    values[i] = inv * prefix[i];
    inv *= v;
  }
}

Felt root_of_unity(unsigned log_order) {
  if (log_order > Felt::kTwoAdicity) {
    throw Error(ErrorCode::kUnsupportedOrder,
                "no 2^" + std::to_string(log_order) + "-th root of unity");
  }
  return Felt(Felt::kGenerator).pow((Felt::kModulus - 1) >> log_order);
}

EvalDomain EvalDomain::subgroup(unsigned log_size) { return coset(log_size, Felt::one()); }

EvalDomain EvalDomain::coset(unsigned log_size, Felt offset) {
  if (offset.is_zero()) throw Error(ErrorCode::kSizeMismatch, "coset offset must be nonzero");
  return EvalDomain{log_size, offset, root_of_unity(log_size)};
}

std::vector<Felt> EvalDomain::elements() const {
  std::vector<Felt> out(size());
  Felt x = offset;
  for (auto& e : out) {
    e = x;
    x *= generator;
  }
  return out;
}

namespace {

void bit_reverse(std::vector<Felt>& a, unsigned log_n) {
  const size_t n = a.size();
  for (size_t i = 0; i < n; ++i) {
    size_t r = 0;
    for (unsigned b = 0; b < log_n; ++b) r |= ((i >> b) & 1) << (log_n - 1 - b);
    if (i < r) std::swap(a[i], a[r]);
  }
}

// In-place iterative Cooley-Tukey evaluation at powers of `root`.
void transform(std::vector<Felt>& a, unsigned log_n, Felt root) {
  const size_t n = a.size();
  bit_reverse(a, log_n);
  std::vector<Felt> twiddles(n / 2 + 1);
  for (size_t len = 2; len <= n; len <<= 1) {
    const size_t half = len / 2;
    Felt w_len = root.pow(n / len);
    twiddles[0] = Felt::one();
    for (size_t j = 1; j < half; ++j) twiddles[j] = twiddles[j - 1] * w_len;
    for (size_t i = 0; i < n; i += len) {
      for (size_t j = 0; j < half; ++j) {
        Felt u = a[i + j];
        Felt v = a[i + j + half] * twiddles[j];
        a[i + j] = u + v;
        a[i + j + half] = u - v;
      }
    }
  }
}

}  // namespace

std::vector<Felt> ntt(std::span<const Felt> coeffs, const EvalDomain& domain) {
  if (coeffs.size() != domain.size()) {
    throw Error(ErrorCode::kSizeMismatch, "ntt input has " + std::to_string(coeffs.size()) +
                                              " coefficients for a domain of " +
                                              std::to_string(domain.size()));
  }
  std::vector<Felt> a(coeffs.begin(), coeffs.end());
  if (domain.offset != Felt::one()) {
    Felt s = Felt::one();
    for (auto& c : a) {
      c *= s;
      s *= domain.offset;
    }
  }
  transform(a, domain.log_size, domain.generator);
  return a;
}

std::vector<Felt> intt(std::span<const Felt> evals, const EvalDomain& domain) {
  if (evals.size() != domain.size()) {
    throw Error(ErrorCode::kSizeMismatch, "intt input has " + std::to_string(evals.size()) +
                                              " values for a domain of " +
                                              std::to_string(domain.size()));
  }
  std::vector<Felt> a(evals.begin(), evals.end());
  transform(a, domain.log_size, domain.generator.inverse());
  const Felt n_inv = Felt(domain.size()).inverse();
  const Felt offset_inv = domain.offset.inverse();
  Felt s = n_inv;
  for (auto& c : a) {
    c *= s;
    s *= offset_inv;
  }
  return a;
}

Felt eval_poly(std::span<const Felt> coeffs, Felt x) {
  Felt acc;
  for (size_t i = coeffs.size(); i-- > 0;) acc = acc * x + coeffs[i];
  return acc;
}

size_t degree_bound(std::span<const Felt> coeffs) {
  size_t n = coeffs.size();
  while (n > 0 && coeffs[n - 1].is_zero()) --n;
  return n;
}

}  // namespace zkdid
