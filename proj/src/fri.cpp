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

#include "zkdid/fri.hpp"

#include <bit>

#include "zkdid/error.hpp"

namespace zkdid {

namespace {

const Felt kInvTwo = Felt(2).inverse();

EvalDomain square_domain(const EvalDomain& d) {
  return EvalDomain{d.log_size - 1, d.offset.square(), d.generator.square()};
}

Bytes encode_coeffs(std::span<const Felt> coeffs) {
  ByteWriter w;
  for (Felt c : coeffs) w.felt(c);
  return std::move(w).take();
}

}  // namespace

unsigned FriShape::num_layers() const {
  unsigned log_d = static_cast<unsigned>(std::countr_zero(degree_bound));
  return log_d <= 2 ? 1 : log_d - 1;
}

void FriShape::validate() const {
  if (log_domain < 2 || log_domain > Felt::kTwoAdicity) {
    throw Error(ErrorCode::kDomainTooSmall, "FRI domain must have at least 4 points");
  }
  if (degree_bound < 2 || !std::has_single_bit(degree_bound) || degree_bound > domain_size() / 2) {
    throw Error(ErrorCode::kDomainTooSmall, "FRI degree bound must be a power of two in [2, domain/2]");
  }
}

Felt fri_fold(Felt fx, Felt fneg, Felt x, Felt beta) {
  Felt even = (fx + fneg) * kInvTwo;
  Felt odd = (fx - fneg) * kInvTwo * x.inverse();
  return even + beta * odd;
}

std::vector<Felt> fri_fold_layer(std::span<const Felt> evals, const EvalDomain& domain, Felt beta) {
  if (evals.size() != domain.size() || evals.size() < 2) {
    throw Error(ErrorCode::kSizeMismatch, "fold input does not match its domain");
  }
  const size_t half = evals.size() / 2;
  std::vector<Felt> inv_x(half);
  Felt x = domain.offset;
  for (size_t i = 0; i < half; ++i) {
    inv_x[i] = x;
    x = x * domain.generator;
  }
  batch_inverse(inv_x);
  std::vector<Felt> out(half);
  for (size_t i = 0; i < half; ++i) {
    Felt a = evals[i], b = evals[i + half];
    out[i] = (a + b) * kInvTwo + beta * (a - b) * kInvTwo * inv_x[i];
  }
  return out;
}

Bytes fri_leaf(Felt v) {
  auto b = v.to_bytes();
  return Bytes(b.begin(), b.end());
}

FriCommitment fri_commit(std::vector<Felt> evals, const EvalDomain& domain, size_t degree_bound,
                         Transcript& t, Rng& rng, std::string_view first_root_label) {
  FriShape shape{domain.log_size, degree_bound};
  shape.validate();
  if (evals.size() != domain.size()) throw Error(ErrorCode::kSizeMismatch, "evaluations do not match domain");

  FriCommitment c;
  EvalDomain d = domain;
  for (unsigned layer = 0; layer < shape.num_layers(); ++layer) {
    std::vector<Bytes> leaves;
    leaves.reserve(evals.size());
    for (Felt v : evals) leaves.push_back(fri_leaf(v));
    c.trees_.push_back(ByteMerkleTree::build(std::move(leaves), rng));
    c.roots_.push_back(c.trees_.back().root());
    t.absorb_digest(layer == 0 ? first_root_label : "fri/layer_root", c.roots_.back());
    Felt beta = t.challenge_felt("fri/beta");
    std::vector<Felt> next = fri_fold_layer(evals, d, beta);
    c.layers_.push_back(std::move(evals));
    evals = std::move(next);
    d = square_domain(d);
  }

  std::vector<Felt> coeffs = intt(evals, d);
  coeffs.resize(shape.final_degree_bound());
  while (!coeffs.empty() && coeffs.back().is_zero()) coeffs.pop_back();
  c.final_coeffs_ = std::move(coeffs);
  t.absorb("fri/final", encode_coeffs(c.final_coeffs_));
  return c;
}

namespace {

BytePath unindexed(BytePath p) {
  p.index = 0;
  return p;
}

}  // namespace

FriProof FriCommitment::open(std::span<const uint32_t> indices) const {
  FriProof p;
  p.layer_roots = roots_;
  p.final_coeffs = final_coeffs_;
  for (uint32_t q : indices) {
    if (layers_.empty() || q >= layers_[0].size()) throw Error(ErrorCode::kIndexOutOfRange, "FRI query index");
    std::vector<FriLayerOpening> per_layer;
    for (size_t i = 0; i < layers_.size(); ++i) {
      const size_t m = layers_[i].size();
      const size_t idx = q % m, sib = (idx + m / 2) % m;
      per_layer.push_back({layers_[i][idx], layers_[i][sib], unindexed(trees_[i].open(idx)), unindexed(trees_[i].open(sib))});
    }
    p.query_openings.push_back(std::move(per_layer));
  }
  return p;
}

std::vector<uint32_t> fri_query_indices(Transcript& t, size_t num_queries, size_t domain_size) {
  return t.challenge_indices("queries", num_queries, domain_size);
}

bool fri_verify(const FriProof& proof, const EvalDomain& domain, size_t degree_bound, size_t num_queries,
                Transcript& t, const FriLayer0Check& check, std::string_view first_root_label) {
  FriShape shape{domain.log_size, degree_bound};
  try {
    shape.validate();
  } catch (const Error&) {
    return false;
  }
  const unsigned layers = shape.num_layers();
  if (proof.layer_roots.size() != layers) return false;
  if (proof.final_coeffs.size() > shape.final_degree_bound()) return false;
  if (proof.query_openings.size() != num_queries) return false;

  std::vector<Felt> betas;
  for (size_t i = 0; i < layers; ++i) {
    t.absorb_digest(i == 0 ? first_root_label : "fri/layer_root", proof.layer_roots[i]);
    betas.push_back(t.challenge_felt("fri/beta"));
  }
  t.absorb("fri/final", encode_coeffs(proof.final_coeffs));
  const std::vector<uint32_t> indices = fri_query_indices(t, num_queries, domain.size());

  std::vector<EvalDomain> domains{domain};
  for (unsigned i = 1; i <= layers; ++i) domains.push_back(square_domain(domains.back()));

  for (size_t qi = 0; qi < num_queries; ++qi) {
    const auto& openings = proof.query_openings[qi];
    if (openings.size() != layers) return false;
    const uint32_t q = indices[qi];
    Felt expected;
    for (unsigned i = 0; i < layers; ++i) {
      const FriLayerOpening& o = openings[i];
      const size_t m = domains[i].size();
      const size_t idx = q % m, sib = (idx + m / 2) % m;
      const auto at = static_cast<uint32_t>(idx), sib_at = static_cast<uint32_t>(sib);
      if (!byte_verify_at(proof.layer_roots[i], fri_leaf(o.value), at, o.path)) return false;
      if (!byte_verify_at(proof.layer_roots[i], fri_leaf(o.sibling_value), sib_at, o.sibling_path)) return false;
      if (i == 0) {
        if (!check(qi, q, o.value)) return false;
      } else if (o.value != expected) {
        return false;
      }
      expected = fri_fold(o.value, o.sibling_value, domains[i].element(idx), betas[i]);
    }
    const size_t last_idx = q % domains[layers].size();
    if (eval_poly(proof.final_coeffs, domains[layers].element(last_idx)) != expected) return false;
  }
  return true;
}

void encode_fri(ByteWriter& w, const FriProof& proof) {
  for (const Digest32& root : proof.layer_roots) w.raw(root);
  w.u8(static_cast<uint8_t>(proof.final_coeffs.size()));
  for (Felt c : proof.final_coeffs) w.felt(c);
  for (const auto& per_layer : proof.query_openings) {
    for (const FriLayerOpening& o : per_layer) {
      w.felt(o.value);
      w.felt(o.sibling_value);
      encode_unindexed_path(w, o.path);
      encode_unindexed_path(w, o.sibling_path);
    }
  }
}

FriProof decode_fri(ByteReader& r, const FriShape& shape, size_t num_queries) {
  try {
    shape.validate();
  } catch (const Error& e) {
    r.fail(e.what());
  }
  const unsigned layers = shape.num_layers();
  FriProof p;
  for (unsigned i = 0; i < layers; ++i) p.layer_roots.push_back(r.fixed<32>());
  const size_t at = r.offset();
  const uint8_t n = r.u8();
  if (n > shape.final_degree_bound()) throw DecodeError(at, "too many final coefficients");
  for (uint8_t i = 0; i < n; ++i) p.final_coeffs.push_back(r.felt());
  if (!p.final_coeffs.empty() && p.final_coeffs.back().is_zero()) {
    throw DecodeError(r.offset() - 8, "untrimmed final coefficients");
  }
  for (size_t q = 0; q < num_queries; ++q) {
    std::vector<FriLayerOpening> per_layer;
    for (unsigned i = 0; i < layers; ++i) {
      FriLayerOpening o;
      o.value = r.felt();
      o.sibling_value = r.felt();
      o.path = decode_unindexed_path(r, shape.log_domain - i);
      o.sibling_path = decode_unindexed_path(r, shape.log_domain - i);
      per_layer.push_back(std::move(o));
    }
    p.query_openings.push_back(std::move(per_layer));
  }
  return p;
}

}  // namespace zkdid
