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
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "zkdid/bytes.hpp"
#include "zkdid/field.hpp"
#include "zkdid/hashing.hpp"
#include "zkdid/merkle.hpp"
#include "zkdid/rng.hpp"

namespace zkdid {

using Nonce = std::array<uint8_t, 16>;

/// Shape of the credential-predicate circuit. The accumulator that produced
/// the root must use the same depth and MiMC round count.
struct AirConfig {
  unsigned tree_depth = 16;
  unsigned range_bits = 32;
  unsigned mimc_rounds = 64;
  size_t trace_length = 2048;

  static AirConfig standard() { return {}; }
  /// Depth-2 tree, 4-bit attributes, 8 MiMC rounds: small enough to enumerate.
  static AirConfig toy() { return {2, 4, 8, 32}; }

  MimcParams mimc() const { return MimcParams(mimc_rounds); }
  /// Attribute values must be below this bound.
  uint64_t value_bound() const { return uint64_t{1} << range_bits; }

  bool operator==(const AirConfig&) const = default;
};

/// Public inputs of a presentation proof.
struct PredicateStatement {
  Felt accumulator_root;
  uint64_t epoch = 0;
  uint8_t attribute_index = 0;
  /// Number of attributes folded into the credential commitment.
  uint8_t attribute_count = 1;
  uint32_t threshold = 0;
  Nonce nonce{};
  std::string issuer_did;

  bool operator==(const PredicateStatement&) const = default;
};

/// tag 0x02 || root || epoch || index || count || threshold || nonce || issuer.
Bytes canonical_encode(const PredicateStatement& stmt);
PredicateStatement decode_statement(std::span<const uint8_t> bytes);

/// Secret inputs.
struct PredicateWitness {
  std::vector<uint32_t> attrs;
  Felt salt;
  uint32_t slot_index = 0;
  AlgPath path;
};

/// Named columns of equal power-of-two length.
struct Trace {
  std::vector<std::string> names;
  std::vector<std::vector<Felt>> columns;

  size_t length() const { return columns.empty() ? 0 : columns.front().size(); }
  size_t width() const { return columns.size(); }
  /// Throws ColumnMismatch for an unknown name.
  size_t index_of(std::string_view name) const;
  std::vector<Felt>& column(std::string_view name) { return columns[index_of(name)]; }
  const std::vector<Felt>& column(std::string_view name) const { return columns[index_of(name)]; }
};

/// Values visible to a transition constraint: the current and next rows of
/// the committed trace and the current row of the public columns.
struct Frame {
  std::span<const Felt> cur;
  std::span<const Felt> next;
  std::span<const Felt> pub;
};

struct TransitionConstraint {
  std::string name;
  /// Total degree in (cur, next, pub) values. Public columns count as
  /// degree one since the verifier treats them as polynomials too.
  unsigned degree = 1;
  /// Which rows the selector factor leaves active.
  std::string active_rows;
  std::function<Felt(const Frame&)> eval;
};

struct BoundaryConstraint {
  std::string name;
  size_t column = 0;
  size_t row = 0;
  Felt value;
};

/// Transitions are enforced on rows [0, N-1); selector factors inside each
/// constraint switch them off where they do not apply.
struct ConstraintSet {
  size_t trace_length = 0;
  std::vector<std::string> trace_columns;
  std::vector<std::string> public_columns;
  /// public_values[c][row]
  std::vector<std::vector<Felt>> public_values;
  std::vector<TransitionConstraint> transitions;
  std::vector<BoundaryConstraint> boundaries;

  unsigned max_degree() const;
};

struct CheckReport {
  bool ok = true;
  std::string constraint;
  size_t row = 0;
};

/// Row layout of the credential-predicate trace.
///
/// The hash lane runs `attribute_count + tree_depth` MiMC blocks of
/// `mimc_rounds` rows each: first the commitment fold over the attributes
/// (block 0 starts from the salt), then one block per Merkle level. The
/// range checks for v and d = v - T run in parallel columns on rows
/// [0, range_bits). Rows after the hash lane are padding.
struct PredicateLayout {
  AirConfig config;
  unsigned attribute_count = 0;
  unsigned attribute_index = 0;

  unsigned blocks() const { return attribute_count + config.tree_depth; }
  size_t hash_rows() const { return size_t{blocks()} * config.mimc_rounds; }
  size_t root_row() const { return hash_rows() - 1; }
  size_t attribute_row() const { return size_t{attribute_index} * config.mimc_rounds; }

  /// Throws AttributeOutOfRange / TraceTooShort when the statement cannot be laid out.
  static PredicateLayout make(const AirConfig& config, const PredicateStatement& stmt);
};

namespace col {
enum Trace : size_t { kX, kK, kL, kU2, kU3, kU6, kY, kB, kV, kVBit, kVAcc, kDBit, kDAcc, kTraceWidth };
enum Public : size_t {
  kRoundConst,
  kHash,
  kRound,
  kLast,
  kStart,
  kFoldNext,
  kPathNext,
  kRange,
  kRangeStep,
  kFirst,
  kRangeEnd,
  kAttr,
  kPublicWidth
};
}  // namespace col

/// Throws AttributeOutOfRange / TraceTooShort for statements that do not fit `config`.
ConstraintSet predicate_constraints(const PredicateStatement& stmt, const AirConfig& config);

/// Fills a satisfying trace. Unconstrained padding cells are fresh random
/// field elements from `rng`.
/// Throws PredicateUnsatisfied, MembershipMismatch, AttributeOutOfRange, TraceTooShort.
Trace build_trace(const PredicateStatement& stmt, const PredicateWitness& wit,
                  const AirConfig& config, Rng& rng);

/// Brute-force evaluation of every constraint on every row. Throws
/// ColumnMismatch when the trace does not have the constraint set's columns.
CheckReport check_trace(const Trace& trace, const ConstraintSet& cs);

}  // namespace zkdid
