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

#include "zkdid/stark.hpp"

#include <algorithm>
#include <bit>

#include "zkdid/error.hpp"
#include "zkdid/transcript.hpp"

namespace zkdid {

namespace {

constexpr std::array<uint8_t, 4> kMagic = {'Z', 'K', 'D', 'P'};
constexpr size_t kMaxTraceLength = size_t{1} << 20;
constexpr uint32_t kMaxQueries = 256;

unsigned log2_exact(size_t n) { return static_cast<unsigned>(std::countr_zero(n)); }

Bytes encode_row(std::span<const Felt> row) {
  ByteWriter w;
  for (Felt v : row) w.felt(v);
  return std::move(w).take();
}

// Interpolants of the public columns at off-domain points. The columns are
// mostly zero, so each one is summed over its nonzero rows in Lagrange form:
//   p(x) = (x^n - 1) / n * sum_i v_i w^i / (x - w^i).
class PublicColumns {
 public:
  PublicColumns(const std::vector<std::vector<Felt>>& columns, const EvalDomain& domain)
      : n_(domain.size()), n_inv_(Felt(domain.size()).inverse()), terms_(columns.size()) {
    std::vector<int64_t> pos(n_, -1);
    for (size_t c = 0; c < columns.size(); ++c) {
      for (size_t i = 0; i < n_; ++i) {
        const Felt v = columns[c][i];
        if (v.is_zero()) continue;
        const Felt point = domain.element(i);
        if (pos[i] < 0) {
          pos[i] = static_cast<int64_t>(points_.size());
          points_.push_back(point);
        }
        terms_[c].emplace_back(static_cast<size_t>(pos[i]), v * point);
      }
    }
  }

  std::vector<Felt> at(Felt x) const {
    std::vector<Felt> inv(points_.size());
    for (size_t k = 0; k < points_.size(); ++k) inv[k] = x - points_[k];
    batch_inverse(inv);
    const Felt scale = (x.pow(n_) - Felt::one()) * n_inv_;
    std::vector<Felt> out(terms_.size());
    for (size_t c = 0; c < terms_.size(); ++c) {
      Felt acc;
      for (const auto& [k, vw] : terms_[c]) acc += vw * inv[k];
      out[c] = acc * scale;
    }
    return out;
  }

 private:
  size_t n_;
  Felt n_inv_;
  std::vector<Felt> points_;
  std::vector<std::vector<std::pair<size_t, Felt>>> terms_;
};

// Random-linear-combination coefficients, transitions first, then boundaries.
struct Mixing {
  std::vector<Felt> alpha;
  std::vector<Felt> beta;
};

Mixing draw_mixing(Transcript& t, const ConstraintSet& cs) {
  Mixing m;
  const size_t k = cs.transitions.size() + cs.boundaries.size();
  for (size_t i = 0; i < k; ++i) {
    m.alpha.push_back(t.challenge_felt("alpha"));
    m.beta.push_back(t.challenge_felt("beta"));
  }
  return m;
}

// CP(x) = sum_k (alpha_k + beta_k x^adj_k) Q_k(x), each summand of degree < 2N.
class Composition {
 public:
  Composition(const ConstraintSet& cs, Mixing mixing) : cs_(cs), mix_(std::move(mixing)) {
    n_ = cs.trace_length;
    const Felt g = root_of_unity(log2_exact(n_));
    g_last_ = g.pow(n_ - 1);
    const uint64_t target = 2 * n_ - 1;
    for (const auto& tc : cs.transitions) adj_.push_back(target - (uint64_t{tc.degree} - 1) * (n_ - 1));
    for (const auto& bc : cs.boundaries) {
      adj_.push_back(target - (n_ - 2));
      boundary_points_.push_back(g.pow(bc.row));
    }
    distinct_ = adj_;
    std::sort(distinct_.begin(), distinct_.end());
    distinct_.erase(std::unique(distinct_.begin(), distinct_.end()), distinct_.end());
    for (uint64_t a : adj_) {
      slot_.push_back(std::lower_bound(distinct_.begin(), distinct_.end(), a) - distinct_.begin());
    }
  }

  Felt operator()(Felt x, const Frame& f) const {
    std::vector<Felt> powers;
    powers.reserve(distinct_.size());
    for (uint64_t a : distinct_) powers.push_back(x.pow(a));

    const Felt z_inv = (x - g_last_) * (x.pow(n_) - Felt::one()).inverse();
    Felt acc;
    size_t k = 0;
    for (const auto& tc : cs_.transitions) {
      const Felt q = tc.eval(f) * z_inv;
      acc = acc + (mix_.alpha[k] + mix_.beta[k] * powers[slot_[k]]) * q;
      ++k;
    }
    for (size_t b = 0; b < cs_.boundaries.size(); ++b, ++k) {
      const auto& bc = cs_.boundaries[b];
      const Felt q = (f.cur[bc.column] - bc.value) * (x - boundary_points_[b]).inverse();
      acc = acc + (mix_.alpha[k] + mix_.beta[k] * powers[slot_[k]]) * q;
    }
    return acc;
  }

 private:
  const ConstraintSet& cs_;
  Mixing mix_;
  size_t n_ = 0;
  Felt g_last_;
  std::vector<uint64_t> adj_;
  std::vector<uint64_t> distinct_;
  std::vector<size_t> slot_;
  std::vector<Felt> boundary_points_;
};

Transcript begin_transcript(const PredicateStatement& stmt, const Digest32& trace_root) {
  Transcript t("zkdid/stark/v1");
  t.absorb("statement", canonical_encode(stmt));
  t.absorb("nonce", stmt.nonce);
  t.absorb_digest("trace_root", trace_root);
  return t;
}

std::vector<Felt> low_degree_extend(std::span<const Felt> column, const EvalDomain& trace_domain,
                                    const EvalDomain& lde) {
  std::vector<Felt> coeffs = intt(column, trace_domain);
  coeffs.resize(lde.size());
  return ntt(coeffs, lde);
}

void write_params(ByteWriter& w, const ProofParams& p) {
  w.u32(p.blowup);
  w.u32(p.num_queries);
  w.u32(static_cast<uint32_t>(p.air.trace_length));
  w.u8(static_cast<uint8_t>(p.air.tree_depth));
  w.u8(static_cast<uint8_t>(p.air.range_bits));
  w.u8(static_cast<uint8_t>(p.air.mimc_rounds));
  w.u8(p.field_id);
  w.u8(p.hash_id);
}

}  // namespace

void ProofParams::validate() const {
  auto bad = [](const std::string& what) { throw Error(ErrorCode::kInvalidParams, what); };
  if (field_id != kFieldGoldilocks || hash_id != kHashSha256Mimc) bad("unknown field or hash identifier");
  if (num_queries == 0 || num_queries > kMaxQueries) bad("query count out of range");
  if (blowup < 8 || !std::has_single_bit(blowup)) bad("blowup must be a power of two of at least 8");
  if (air.trace_length > kMaxTraceLength || air.mimc_rounds > 255 || air.tree_depth > 255) {
    bad("configuration too large");
  }
  if (log2_exact(lde_size()) > Felt::kTwoAdicity) bad("evaluation domain too large");
  ConstraintSet cs;
  try {
    cs = predicate_constraints(PredicateStatement{}, air);
  } catch (const Error& e) {
    bad(e.what());
  }
  // Composition summands are sized for degree-3 constraints (bound 2N).
  if (cs.max_degree() >= blowup || cs.max_degree() > 3) bad("constraint degree exceeds the composition bound");
}

StarkProof prove(const PredicateStatement& stmt, const PredicateWitness& wit, const ProofParams& params,
                 uint64_t seed) {
  params.validate();
  Rng trace_rng = Rng(seed).derive("stark/trace");
  return prove_trace(stmt, build_trace(stmt, wit, params.air, trace_rng), params, seed);
}

StarkProof prove_trace(const PredicateStatement& stmt, const Trace& trace, const ProofParams& params,
                       uint64_t seed, bool degree_audit) {
  params.validate();
  const ConstraintSet cs = predicate_constraints(stmt, params.air);
  if (trace.names != cs.trace_columns || trace.length() != cs.trace_length) {
    throw Error(ErrorCode::kColumnMismatch, "trace does not match the constraint set");
  }
  const Rng base(seed);
  Rng trace_salts = base.derive("stark/trace_salts");
  Rng fri_salts = base.derive("stark/fri_salts");

  const size_t n = params.trace_length(), m = params.lde_size(), blowup = params.blowup;
  const EvalDomain trace_domain = EvalDomain::subgroup(log2_exact(n));
  const EvalDomain lde = EvalDomain::coset(log2_exact(m), Felt(Felt::kGenerator));

  std::vector<std::vector<Felt>> cols, pubs;
  for (const auto& c : trace.columns) cols.push_back(low_degree_extend(c, trace_domain, lde));
  for (const auto& c : cs.public_values) pubs.push_back(low_degree_extend(c, trace_domain, lde));
  const size_t w = cols.size(), pw = pubs.size();

  std::vector<std::vector<Felt>> rows(m, std::vector<Felt>(w));
  std::vector<Bytes> leaves;
  leaves.reserve(m);
  for (size_t i = 0; i < m; ++i) {
    for (size_t c = 0; c < w; ++c) rows[i][c] = cols[c][i];
    leaves.push_back(encode_row(rows[i]));
  }
  const ByteMerkleTree trace_tree = ByteMerkleTree::build(std::move(leaves), trace_salts);

  Transcript t = begin_transcript(stmt, trace_tree.root());
  const Composition composition(cs, draw_mixing(t, cs));

  std::vector<Felt> cp(m);
  std::vector<Felt> pub_row(pw);
  const std::vector<Felt> xs = lde.elements();
  for (size_t i = 0; i < m; ++i) {
    for (size_t c = 0; c < pw; ++c) pub_row[c] = pubs[c][i];
    const Frame f{rows[i], rows[(i + blowup) % m], pub_row};
    cp[i] = composition(xs[i], f);
  }
  if (degree_audit && degree_bound(intt(cp, lde)) > params.composition_degree_bound()) {
    throw Error(ErrorCode::kInternalDegreeOverflow, "composition polynomial exceeds its degree bound");
  }

  const FriCommitment fri =
      fri_commit(std::move(cp), lde, params.composition_degree_bound(), t, fri_salts, "composition_root");
  const std::vector<uint32_t> queries = fri_query_indices(t, params.num_queries, m);

  StarkProof proof;
  proof.params = params;
  proof.trace_root = trace_tree.root();
  proof.composition_root = fri.layer_roots().front();
  for (uint32_t q : queries) {
    const size_t next = (q + blowup) % m;
    TraceOpening o{rows[q], trace_tree.open(q), rows[next], trace_tree.open(next)};
    o.path.index = o.next_path.index = 0;
    proof.trace_openings.push_back(std::move(o));
  }
  proof.fri = fri.open(queries);
  return proof;
}

bool verify(const PredicateStatement& stmt, const Nonce& nonce, const StarkProof& proof) {
  try {
    PredicateStatement s = stmt;
    s.nonce = nonce;
    const ProofParams& params = proof.params;
    params.validate();
    const ConstraintSet cs = predicate_constraints(s, params.air);
    const size_t n = params.trace_length(), m = params.lde_size(), blowup = params.blowup;
    const size_t w = cs.trace_columns.size();
    if (proof.trace_openings.size() != params.num_queries) return false;
    if (proof.fri.layer_roots.empty() || proof.fri.layer_roots.front() != proof.composition_root) return false;

    const EvalDomain trace_domain = EvalDomain::subgroup(log2_exact(n));
    const EvalDomain lde = EvalDomain::coset(log2_exact(m), Felt(Felt::kGenerator));

    Transcript t = begin_transcript(s, proof.trace_root);
    const Composition composition(cs, draw_mixing(t, cs));
    const PublicColumns pub_cols(cs.public_values, trace_domain);

    auto check = [&](size_t qi, uint32_t q, Felt value) {
      const TraceOpening& o = proof.trace_openings[qi];
      if (o.row.size() != w || o.next_row.size() != w) return false;
      const auto next = static_cast<uint32_t>((q + blowup) % m);
      if (!byte_verify_at(proof.trace_root, encode_row(o.row), q, o.path)) return false;
      if (!byte_verify_at(proof.trace_root, encode_row(o.next_row), next, o.next_path)) return false;
      const Felt x = lde.element(q);
      return composition(x, Frame{o.row, o.next_row, pub_cols.at(x)}) == value;
    };
    return fri_verify(proof.fri, lde, params.composition_degree_bound(), params.num_queries, t, check,
                      "composition_root");
  } catch (const std::exception&) {
    return false;
  }
}

bool verify(const PredicateStatement& stmt, const StarkProof& proof) { return verify(stmt, stmt.nonce, proof); }

Bytes encode_proof(const StarkProof& proof) {
  ByteWriter w;
  w.raw(kMagic);
  w.u16(ProofParams::kVersion);
  write_params(w, proof.params);
  w.raw(proof.trace_root);
  for (const TraceOpening& o : proof.trace_openings) {
    for (Felt v : o.row) w.felt(v);
    encode_unindexed_path(w, o.path);
    for (Felt v : o.next_row) w.felt(v);
    encode_unindexed_path(w, o.next_path);
  }
  encode_fri(w, proof.fri);
  return std::move(w).take();
}

StarkProof decode_proof(std::span<const uint8_t> bytes) {
  ByteReader r(bytes);
  if (r.fixed<4>() != kMagic) throw DecodeError(0, "bad proof magic");
  const uint16_t version = r.u16();
  if (version != ProofParams::kVersion) {
    throw DecodeError(4, "unsupported proof version " + std::to_string(version), ErrorCode::kUnsupportedVersion);
  }
  StarkProof p;
  const size_t params_at = r.offset();
  p.params.blowup = r.u32();
  p.params.num_queries = r.u32();
  p.params.air.trace_length = r.u32();
  p.params.air.tree_depth = r.u8();
  p.params.air.range_bits = r.u8();
  p.params.air.mimc_rounds = r.u8();
  p.params.field_id = r.u8();
  p.params.hash_id = r.u8();
  try {
    p.params.validate();
  } catch (const Error& e) {
    throw DecodeError(params_at, e.what());
  }

  const size_t m = p.params.lde_size();
  const unsigned depth = log2_exact(m);
  const size_t width = col::kTraceWidth;
  p.trace_root = r.fixed<32>();
  for (uint32_t q = 0; q < p.params.num_queries; ++q) {
    TraceOpening o;
    for (size_t c = 0; c < width; ++c) o.row.push_back(r.felt());
    o.path = decode_unindexed_path(r, depth);
    for (size_t c = 0; c < width; ++c) o.next_row.push_back(r.felt());
    o.next_path = decode_unindexed_path(r, depth);
    p.trace_openings.push_back(std::move(o));
  }
  p.fri = decode_fri(r, FriShape{depth, p.params.composition_degree_bound()}, p.params.num_queries);
  p.composition_root = p.fri.layer_roots.front();
  r.expect_done();
  return p;
}

}  // namespace zkdid
