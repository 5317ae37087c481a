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

#include <gtest/gtest.h>

#include <string_view>
#include <unordered_set>

#include "test_util.hpp"
#include "zkdid/error.hpp"

namespace zkdid {
namespace {

using testing::Instance;
using testing::random_instance;

Instance toy_instance(uint32_t v, uint32_t threshold, uint64_t seed) {
  std::mt19937_64 gen(seed);
  const AirConfig cfg = AirConfig::toy();
  Instance in = random_instance(cfg, gen);
  in.wit.attrs[0] = v;
  in.stmt.threshold = threshold;
  in.stmt.accumulator_root =
      alg_path_root(commit_attributes(in.wit.attrs, in.wit.salt, cfg.mimc()), in.wit.path, cfg.mimc());
  return in;
}

struct ToyProof {
  Instance in = toy_instance(12, 10, 42);
  StarkProof proof = prove(in.stmt, in.wit, ProofParams::toy(), 7);
  Bytes bytes = encode_proof(proof);
};

const ToyProof& toy() {
  static const ToyProof p;
  return p;
}

TEST(StarkTest, ParamsValidation) {
  EXPECT_NO_THROW(ProofParams::standard().validate());
  EXPECT_NO_THROW(ProofParams::toy().validate());
  for (auto mutate : std::vector<std::function<void(ProofParams&)>>{
           [](ProofParams& p) { p.blowup = 4; },
           [](ProofParams& p) { p.blowup = 12; },
           [](ProofParams& p) { p.num_queries = 0; },
           [](ProofParams& p) { p.air.trace_length = 1000; },
           [](ProofParams& p) { p.air.trace_length = 16; },
           [](ProofParams& p) { p.field_id = 2; },
           [](ProofParams& p) { p.hash_id = 0; },
       }) {
    ProofParams p = ProofParams::toy();
    mutate(p);
    try {
      p.validate();
      ADD_FAILURE() << "accepted invalid params";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kInvalidParams);
    }
  }
}

TEST(StarkTest, ToyEndToEnd) {
  const auto& t = toy();
  Rng rng(1);
  auto trace = build_trace(t.in.stmt, t.in.wit, AirConfig::toy(), rng);
  ASSERT_TRUE(check_trace(trace, predicate_constraints(t.in.stmt, AirConfig::toy())).ok);
  EXPECT_TRUE(verify(t.in.stmt, t.proof));
  EXPECT_EQ(t.proof.trace_openings.size(), 30u);
  EXPECT_EQ(t.proof.composition_root, t.proof.fri.layer_roots.front());
}

TEST(StarkTest, CreditScoreScenario) {
  std::mt19937_64 gen(750);
  Instance in = random_instance(AirConfig::standard(), gen);
  in.wit.attrs = {750};
  in.stmt.threshold = 700;
  in.stmt.accumulator_root = alg_path_root(commit_attributes(in.wit.attrs, in.wit.salt), in.wit.path);
  StarkProof proof = prove(in.stmt, in.wit, ProofParams::standard(), 1);
  EXPECT_TRUE(verify(in.stmt, proof));
  EXPECT_TRUE(verify(in.stmt, decode_proof(encode_proof(proof))));
  in.stmt.threshold = 751;
  try {
    prove(in.stmt, in.wit, ProofParams::standard(), 1);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPredicateUnsatisfied);
  }
}

TEST(StarkTest, CompletenessToy) {
  std::mt19937_64 gen(100);
  for (int i = 0; i < 100; ++i) {
    Instance in = random_instance(AirConfig::toy(), gen);
    StarkProof proof = prove(in.stmt, in.wit, ProofParams::toy(), gen());
    ASSERT_TRUE(verify(in.stmt, proof)) << i;
  }
}

TEST(StarkTest, CompletenessDefault) {
  std::mt19937_64 gen(200);
  for (int i = 0; i < 100; ++i) {
    unsigned count = 1 + static_cast<unsigned>(gen() % 3);
    Instance in = random_instance(AirConfig::standard(), gen, count, static_cast<unsigned>(gen() % count));
    StarkProof proof = prove(in.stmt, in.wit, ProofParams::standard(), gen());
    ASSERT_TRUE(verify(in.stmt, proof)) << i;
  }
}

TEST(StarkTest, Determinism) {
  const auto& t = toy();
  EXPECT_EQ(encode_proof(prove(t.in.stmt, t.in.wit, ProofParams::toy(), 7)), t.bytes);
  StarkProof other = prove(t.in.stmt, t.in.wit, ProofParams::toy(), 8);
  EXPECT_NE(encode_proof(other), t.bytes);
  EXPECT_TRUE(verify(t.in.stmt, other));
}

TEST(StarkTest, NonceSubstitutionRejected) {
  const auto& t = toy();
  for (int byte = 0; byte < 16; ++byte) {
    Nonce n = t.in.stmt.nonce;
    n[byte] ^= 0x01;
    EXPECT_FALSE(verify(t.in.stmt, n, t.proof)) << byte;
  }
  EXPECT_TRUE(verify(t.in.stmt, t.in.stmt.nonce, t.proof));
}

TEST(StarkTest, StatementBinding) {
  std::mt19937_64 gen(300);
  Instance in = random_instance(AirConfig::standard(), gen, 2, 1);
  StarkProof proof = prove(in.stmt, in.wit, ProofParams::standard(), 3);
  ASSERT_TRUE(verify(in.stmt, proof));
  std::vector<std::function<void(PredicateStatement&)>> variants = {
      [](PredicateStatement& s) { s.accumulator_root += Felt(1); },
      [](PredicateStatement& s) { s.threshold ^= 1; },
      [](PredicateStatement& s) { s.epoch += 1; },
      [](PredicateStatement& s) { s.attribute_index = 0; },
      [](PredicateStatement& s) { s.attribute_count = 3; },
      [](PredicateStatement& s) { s.issuer_did += "x"; },
  };
  for (size_t i = 0; i < variants.size(); ++i) {
    PredicateStatement s = in.stmt;
    variants[i](s);
    EXPECT_FALSE(verify(s, proof)) << "variant " << i;
  }
}

TEST(StarkTest, ParamsInProofMustMatchStatementFit) {
  const auto& t = toy();
  StarkProof p = t.proof;
  p.params.num_queries = 29;
  EXPECT_FALSE(verify(t.in.stmt, p));
  p = t.proof;
  p.trace_openings.pop_back();
  EXPECT_FALSE(verify(t.in.stmt, p));
  EXPECT_FALSE(verify(t.in.stmt, StarkProof{}));
}

// A prover that skips the witness checks: each trace below violates one
// constraint family. The verifier must reject every resulting proof.
TEST(StarkTest, ForgedTracesRejected) {
  const auto& t = toy();
  const AirConfig cfg = AirConfig::toy();
  Rng rng(5);
  const Trace honest = build_trace(t.in.stmt, t.in.wit, cfg, rng);
  struct Forgery {
    const char* column;
    size_t row;
  };
  for (Forgery f : {Forgery{"x", 3}, Forgery{"y", 23}, Forgery{"v_bit", 1}, Forgery{"d_acc", 3},
                    Forgery{"v", 10}, Forgery{"b", 8}}) {
    Trace bad = honest;
    bad.column(f.column)[f.row] += Felt(1);
    ASSERT_FALSE(check_trace(bad, predicate_constraints(t.in.stmt, cfg)).ok) << f.column;
    try {
      prove_trace(t.in.stmt, bad, ProofParams::toy(), 9);
      ADD_FAILURE() << "degree audit passed for " << f.column;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kInternalDegreeOverflow);
    }
    StarkProof p = prove_trace(t.in.stmt, bad, ProofParams::toy(), 9, false);
    EXPECT_FALSE(verify(t.in.stmt, p)) << f.column;
  }
  // Claiming a higher threshold than the attribute supports.
  PredicateStatement lie = t.in.stmt;
  lie.threshold = 13;
  StarkProof p = prove_trace(lie, honest, ProofParams::toy(), 9, false);
  EXPECT_FALSE(verify(lie, p));
}

TEST(StarkTest, EncodingRoundTrip) {
  const auto& t = toy();
  EXPECT_EQ(decode_proof(t.bytes), t.proof);
  EXPECT_EQ(encode_proof(decode_proof(t.bytes)), t.bytes);
  EXPECT_EQ(std::string_view(reinterpret_cast<const char*>(t.bytes.data()), 4), "ZKDP");
}

TEST(StarkTest, TruncationAlwaysFailsToDecode) {
  const Bytes& b = toy().bytes;
  for (size_t cut = 0; cut < b.size(); cut += (cut < 4096 ? 1 : 61)) {
    EXPECT_THROW(decode_proof(std::span<const uint8_t>(b).first(cut)), DecodeError) << cut;
  }
  Bytes longer = b;
  longer.push_back(0);
  EXPECT_THROW(decode_proof(longer), DecodeError);
}

TEST(StarkTest, VersionAndMagic) {
  Bytes b = toy().bytes;
  b[5] = 2;
  try {
    decode_proof(b);
    ADD_FAILURE();
  } catch (const DecodeError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnsupportedVersion);
    EXPECT_EQ(e.offset(), 4u);
  }
  b = toy().bytes;
  b[0] = 'X';
  EXPECT_THROW(decode_proof(b), DecodeError);
}

TEST(StarkTest, BitFlipsNeverAccepted) {
  const auto& t = toy();
  std::mt19937_64 gen(1000);
  int accepted = 0, decode_errors = 0;
  for (int i = 0; i < 1000; ++i) {
    Bytes b = t.bytes;
    const size_t bit = gen() % (b.size() * 8);
    b[bit / 8] ^= static_cast<uint8_t>(1u << (bit % 8));
    try {
      accepted += verify(t.in.stmt, decode_proof(b));
    } catch (const DecodeError&) {
      ++decode_errors;
    }
  }
  EXPECT_EQ(accepted, 0);
  RecordProperty("decode_errors", decode_errors);
}

TEST(StarkTest, UnlinkableAcrossSeedsAndNonces) {
  std::mt19937_64 gen(400);
  Instance in = random_instance(AirConfig::standard(), gen);
  PredicateStatement s1 = in.stmt, s2 = in.stmt;
  s2.nonce[0] ^= 0xff;
  const Bytes a = encode_proof(prove(s1, in.wit, ProofParams::standard(), 11));
  const Bytes b = encode_proof(prove(s2, in.wit, ProofParams::standard(), 12));
  const size_t window = kProofHeaderSize + 1;
  ASSERT_TRUE(std::equal(a.begin(), a.begin() + kProofHeaderSize, b.begin()));
  std::unordered_set<std::string_view> seen;
  auto view = [&](const Bytes& x, size_t i) { return std::string_view(reinterpret_cast<const char*>(x.data()) + i, window); };
  for (size_t i = 0; i + window <= a.size(); ++i) seen.insert(view(a, i));
  size_t shared = 0;
  for (size_t i = 0; i + window <= b.size(); ++i) shared += seen.count(view(b, i));
  EXPECT_EQ(shared, 0u);
}

}  // namespace
}  // namespace zkdid
