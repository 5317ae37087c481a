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
#include <span>
#include <vector>

#include "zkdid/air.hpp"
#include "zkdid/fri.hpp"
#include "zkdid/merkle.hpp"

namespace zkdid {

struct ProofParams {
  static constexpr uint16_t kVersion = 1;
  static constexpr uint8_t kFieldGoldilocks = 1;
  static constexpr uint8_t kHashSha256Mimc = 1;

  uint32_t blowup = 8;
  uint32_t num_queries = 30;
  AirConfig air;
  uint8_t field_id = kFieldGoldilocks;
  uint8_t hash_id = kHashSha256Mimc;

  static ProofParams standard() { return {}; }
  static ProofParams toy() { return {8, 30, AirConfig::toy()}; }

  size_t trace_length() const { return air.trace_length; }
  size_t lde_size() const { return air.trace_length * blowup; }
  /// Strict bound on the degree of the composition polynomial.
  size_t composition_degree_bound() const { return 2 * air.trace_length; }

  /// Throws InvalidParams unless the blowup dominates the constraint degree
  /// and every size is a supported power of two.
  void validate() const;

  bool operator==(const ProofParams&) const = default;
};

/// Rows q and q + blowup of the trace LDE (the points x and g x). Path
/// indices are left at 0; positions follow from the query index.
struct TraceOpening {
  std::vector<Felt> row;
  BytePath path;
  std::vector<Felt> next_row;
  BytePath next_path;

  bool operator==(const TraceOpening&) const = default;
};

struct StarkProof {
  ProofParams params;
  Digest32 trace_root{};
  /// Root of the composition evaluations; the same tree is FRI layer 0.
  Digest32 composition_root{};
  std::vector<TraceOpening> trace_openings;
  FriProof fri;

  bool operator==(const StarkProof&) const = default;
};

/// Same (stmt, wit, params, seed) gives a bit-identical proof.
/// Throws the build_trace errors, InvalidParams, InternalDegreeOverflow.
StarkProof prove(const PredicateStatement& stmt, const PredicateWitness& wit, const ProofParams& params,
                 uint64_t seed);

/// Proves an already-built trace. With `degree_audit` off, an invalid trace
/// still yields a proof object, which the verifier must then reject.
StarkProof prove_trace(const PredicateStatement& stmt, const Trace& trace, const ProofParams& params,
                       uint64_t seed, bool degree_audit = true);

/// Verifies against `stmt` with its nonce replaced by `nonce`. Never throws.
bool verify(const PredicateStatement& stmt, const Nonce& nonce, const StarkProof& proof);
bool verify(const PredicateStatement& stmt, const StarkProof& proof);

/// "ZKDP" || version u16 || params || body, big-endian throughout.
Bytes encode_proof(const StarkProof& proof);
/// Throws DecodeError (UnsupportedVersion for a version other than 1).
StarkProof decode_proof(std::span<const uint8_t> bytes);

/// Byte length of the fixed magic/version/params header.
inline constexpr size_t kProofHeaderSize = 4 + 2 + 3 * 4 + 5;

}  // namespace zkdid
