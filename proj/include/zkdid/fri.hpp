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
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "zkdid/bytes.hpp"
#include "zkdid/field.hpp"
#include "zkdid/merkle.hpp"
#include "zkdid/rng.hpp"
#include "zkdid/transcript.hpp"

namespace zkdid {

/// Shape of one FRI instance. `degree_bound` is the claimed strict upper
/// bound on the degree of the committed function; both are powers of two.
struct FriShape {
  unsigned log_domain = 0;
  size_t degree_bound = 0;

  size_t domain_size() const { return size_t{1} << log_domain; }
  /// Number of committed layers. Folding stops once the remaining degree
  /// bound is at most 2, so the final polynomial is sent as <= 2 coefficients.
  unsigned num_layers() const;
  size_t final_degree_bound() const { return degree_bound >> num_layers(); }

  /// Throws DomainTooSmall unless 4 <= domain, 2 <= degree_bound <= domain / 2.
  void validate() const;
};

/// Openings of one layer at a query: the point x and its negation. Path
/// indices are left at 0; positions follow from the query index.
struct FriLayerOpening {
  Felt value;
  Felt sibling_value;
  BytePath path;
  BytePath sibling_path;

  bool operator==(const FriLayerOpening&) const = default;
};

struct FriProof {
  std::vector<Digest32> layer_roots;
  /// Coefficients of the last fold, low degree first, trailing zeros trimmed.
  std::vector<Felt> final_coeffs;
  /// query_openings[q][layer]
  std::vector<std::vector<FriLayerOpening>> query_openings;

  bool operator==(const FriProof&) const = default;
};

/// Prover state after the commit phase.
class FriCommitment {
 public:
  const std::vector<Digest32>& layer_roots() const { return roots_; }
  const std::vector<Felt>& final_coeffs() const { return final_coeffs_; }
  /// Evaluations of layer i (layer 0 is the input).
  const std::vector<Felt>& layer(size_t i) const { return layers_.at(i); }

  /// Opens every layer at each layer-0 index. Throws IndexOutOfRange.
  FriProof open(std::span<const uint32_t> indices) const;

 private:
  friend FriCommitment fri_commit(std::vector<Felt>, const EvalDomain&, size_t, Transcript&, Rng&,
                                  std::string_view);

  std::vector<std::vector<Felt>> layers_;
  std::vector<ByteMerkleTree> trees_;
  std::vector<Digest32> roots_;
  std::vector<Felt> final_coeffs_;
};

/// One fold step: g(x^2) = (f(x) + f(-x))/2 + beta (f(x) - f(-x)) / (2x).
Felt fri_fold(Felt fx, Felt fneg, Felt x, Felt beta);

/// Folds a whole layer over `domain`; the result lives on the squared domain.
std::vector<Felt> fri_fold_layer(std::span<const Felt> evals, const EvalDomain& domain, Felt beta);

Bytes fri_leaf(Felt v);

/// Commit phase. Per layer: absorb "fri/layer_root", squeeze "fri/beta";
/// then absorb "fri/final" with the final coefficients. The first root is
/// absorbed under `first_root_label` instead.
/// Throws DomainTooSmall, SizeMismatch.
FriCommitment fri_commit(std::vector<Felt> evals, const EvalDomain& domain, size_t degree_bound,
                         Transcript& t, Rng& rng, std::string_view first_root_label = "fri/layer_root");

/// Squeezes the "queries" indices over the layer-0 domain.
std::vector<uint32_t> fri_query_indices(Transcript& t, size_t num_queries, size_t domain_size);

/// Receives (query number, layer-0 index, claimed layer-0 value).
using FriLayer0Check = std::function<bool(size_t, uint32_t, Felt)>;

/// Replays the commit phase on `t`, samples the query indices and checks
/// every opening, fold link and the final polynomial. Never throws.
bool fri_verify(const FriProof& proof, const EvalDomain& domain, size_t degree_bound, size_t num_queries,
                Transcript& t, const FriLayer0Check& check,
                std::string_view first_root_label = "fri/layer_root");

void encode_fri(ByteWriter& w, const FriProof& proof);
/// Layer and query counts follow from the shape; paths must match the layer depths.
FriProof decode_fri(ByteReader& r, const FriShape& shape, size_t num_queries);

}  // namespace zkdid
