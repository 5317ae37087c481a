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

#include "zkdid/accumulator.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <random>
#include <thread>

#include "zkdid/error.hpp"

namespace zkdid {
namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorCode::kIoError;
}

Accumulator toy() { return Accumulator::for_config(AirConfig::toy()); }

// Frozen values from tests/oracles/golden.py.
TEST(AccumulatorTest, ToyGoldenRoots) {
  Accumulator acc = toy();
  EXPECT_EQ(acc.root().value(), 14268047921697570398ULL);
  EXPECT_EQ(acc.add(Felt(12345)), 0u);
  EXPECT_EQ(acc.root().value(), 10732902658453944864ULL);
  EXPECT_EQ(acc.add(Felt(777)), 1u);
  EXPECT_EQ(acc.root().value(), 211317392242496620ULL);
  EXPECT_EQ(acc.revoke(0), 3u);
  EXPECT_EQ(acc.root().value(), 5206260616097200021ULL);
}

TEST(AccumulatorTest, FirstAddMatchesFold) {
  Accumulator acc = toy();
  const Felt c(99);
  acc.add(c);
  const MimcParams m(8);
  EXPECT_EQ(acc.root(), h2(h2(c, Felt(0), m), h2(Felt(0), Felt(0), m), m));
  EXPECT_EQ(acc.epoch(), 1u);
}

TEST(AccumulatorTest, CapacityAndRevocation) {
  Accumulator acc = toy();
  for (int i = 0; i < 4; ++i) acc.add(Felt(i + 1));
  EXPECT_EQ(code_of([&] { acc.add(Felt(9)); }), ErrorCode::kCapacityExhausted);
  acc.revoke(2);
  // Revoked slots are never handed out again.
  EXPECT_EQ(code_of([&] { acc.add(Felt(9)); }), ErrorCode::kCapacityExhausted);
  EXPECT_EQ(code_of([&] { acc.revoke(2); }), ErrorCode::kSlotNotOccupied);
  EXPECT_EQ(code_of([&] { acc.witness(2); }), ErrorCode::kSlotNotOccupied);
}

TEST(AccumulatorTest, RevokeOnlyCredentialGivesEmptyRoot) {
  Accumulator acc = toy();
  const Felt z = acc.root();
  uint32_t slot = acc.add(Felt(5));
  MembershipWitness w = acc.witness(slot);
  EXPECT_TRUE(alg_verify(acc.root(), Felt(5), w.path, acc.mimc()));
  acc.revoke(slot);
  EXPECT_EQ(acc.root(), z);
  EXPECT_FALSE(alg_verify(acc.root(), Felt(5), w.path, acc.mimc()));
  EXPECT_EQ(code_of([&] { acc.refresh(w); }), ErrorCode::kSlotNotOccupied);
}

TEST(AccumulatorTest, RefreshAfterUnrelatedRevocation) {
  Accumulator acc = toy();
  const Felt a(111), b(222);
  uint32_t sa = acc.add(a);
  uint32_t sb = acc.add(b);
  MembershipWitness stale = acc.witness(sa);
  acc.revoke(sb);
  EXPECT_FALSE(alg_verify(acc.root(), a, stale.path, acc.mimc()));
  MembershipWitness fresh = acc.refresh(stale);
  EXPECT_TRUE(alg_verify(acc.root(), a, fresh.path, acc.mimc()));
  EXPECT_EQ(fresh.epoch, acc.epoch());
  EXPECT_EQ(fresh.slot, sa);
}

TEST(AccumulatorTest, RootHistory) {
  Accumulator acc = toy();
  EXPECT_EQ(acc.root_at(0), zero_subtree_roots(2, MimcParams(8))[2]);
  acc.add(Felt(1));
  acc.add(Felt(2));
  EXPECT_EQ(acc.root_at(acc.epoch()), acc.root());
  EXPECT_EQ(code_of([&] { acc.root_at(acc.epoch() + 1); }), ErrorCode::kUnknownEpoch);
  EXPECT_EQ(acc.history().size(), 3u);
}

// Rebuild oracle: full alg_root over the implied leaf vector after each of
// 1000 random operations. Slots are never reused, so the test uses depth 10
// to keep enough capacity for the whole sequence.
TEST(AccumulatorTest, RandomizedRebuildEquality) {
  const unsigned depth = 10;
  const MimcParams m(8);
  Accumulator acc(depth, 8);
  std::vector<Felt> leaves(size_t{1} << depth);
  std::vector<std::vector<Felt>> leaves_at{leaves};
  std::map<uint32_t, MembershipWitness> last_witness;
  std::map<uint32_t, uint64_t> revoked_at;
  std::mt19937_64 gen(11);
  for (int step = 0; step < 1000; ++step) {
    auto occ = acc.occupied();
    if (occ.empty() || gen() % 3 != 0) {
      Felt c(gen());
      uint32_t slot = acc.add(c);
      leaves[slot] = c;
    } else {
      auto it = occ.begin();
      std::advance(it, gen() % occ.size());
      acc.revoke(it->first);
      leaves[it->first] = Felt(0);
      revoked_at[it->first] = acc.epoch();
    }
    leaves_at.push_back(leaves);
    ASSERT_EQ(acc.root(), alg_root(leaves, depth, m)) << step;
    ASSERT_EQ(acc.epoch(), static_cast<uint64_t>(step + 1));
    if (step % 50 == 0) {
      for (const auto& [slot, c] : acc.occupied()) {
        MembershipWitness w = acc.witness(slot);
        ASSERT_EQ(w.path, alg_open(leaves, slot, depth, m));
        ASSERT_TRUE(alg_verify(acc.root(), c, w.path, m));
        last_witness[slot] = w;
      }
    }
  }
  for (size_t e = 0; e < leaves_at.size(); ++e) {
    ASSERT_EQ(acc.root_at(e), alg_root(leaves_at[e], depth, m));
  }
  // Revocation is immediate: no older witness verifies at or after the revocation epoch.
  for (const auto& [slot, epoch] : revoked_at) {
    auto it = last_witness.find(slot);
    if (it == last_witness.end()) continue;
    const Felt c = leaves_at[it->second.epoch][slot];
    for (uint64_t e = epoch; e <= acc.epoch(); ++e) {
      ASSERT_FALSE(alg_verify(acc.root_at(e), c, it->second.path, m));
    }
  }
}

// A witness taken at epoch e verifies against root_at(e') exactly when the
// leaves on its path are unchanged between e and e'.
TEST(AccumulatorTest, HistoricalWitnessValidity) {
  const unsigned depth = 4;
  const MimcParams m(8);
  Accumulator acc(depth, 8);
  std::mt19937_64 gen(12);
  std::vector<std::vector<Felt>> leaves_at{std::vector<Felt>(16)};
  std::vector<std::pair<MembershipWitness, Felt>> witnesses;
  for (int step = 0; step < 40; ++step) {
    auto occ = acc.occupied();
    if (acc.slots_used() < 16 && (occ.empty() || gen() % 2)) {
      acc.add(Felt(gen()));
    } else if (!occ.empty()) {
      auto it = occ.begin();
      std::advance(it, gen() % occ.size());
      acc.revoke(it->first);
    } else {
      break;
    }
    std::vector<Felt> leaves(16);
    for (const auto& [s, c] : acc.occupied()) leaves[s] = c;
    leaves_at.push_back(leaves);
    for (const auto& [s, c] : acc.occupied()) witnesses.emplace_back(acc.witness(s), c);
  }
  for (const auto& [w, c] : witnesses) {
    for (uint64_t e = 0; e <= acc.epoch(); ++e) {
      const bool same = leaves_at[e] == leaves_at[w.epoch];
      const bool verifies = alg_verify(acc.root_at(e), c, w.path, m);
      if (same) EXPECT_TRUE(verifies);
      if (verifies) EXPECT_EQ(leaves_at[e][w.slot], c);
    }
  }
}

TEST(AccumulatorTest, PersistenceRoundTrip) {
  Accumulator acc = toy();
  acc.add(Felt(10));
  acc.add(Felt(20));
  acc.revoke(0);
  const std::string text = acc.serialize();
  Accumulator back = Accumulator::deserialize(text);
  EXPECT_EQ(back.serialize(), text);
  EXPECT_EQ(back.root(), acc.root());
  EXPECT_EQ(back.history(), acc.history());
  EXPECT_EQ(code_of([&] { back.add(Felt(1)); back.add(Felt(1)); back.add(Felt(1)); }),
            ErrorCode::kCapacityExhausted);

  const auto path = std::filesystem::temp_directory_path() / "zkdid_acc_test.txt";
  acc.save(path.string());
  EXPECT_EQ(Accumulator::load(path.string()).serialize(), text);
  std::filesystem::remove(path);
  EXPECT_EQ(code_of([&] { Accumulator::load("/nonexistent/dir/acc"); }), ErrorCode::kIoError);
}

TEST(AccumulatorTest, CorruptFilesRejected) {
  Accumulator acc = toy();
  acc.add(Felt(10));
  const std::string text = acc.serialize();
  std::string tampered = text;
  tampered.replace(tampered.find("S 0 10"), 6, "S 0 11");
  EXPECT_EQ(code_of([&] { Accumulator::deserialize(tampered); }), ErrorCode::kParseError);
  EXPECT_EQ(code_of([&] { Accumulator::deserialize("ZKDA 2 8"); }), ErrorCode::kParseError);
  EXPECT_EQ(code_of([&] { Accumulator::deserialize(text + "X 1 2\n"); }), ErrorCode::kParseError);
  EXPECT_EQ(code_of([&] { Accumulator::deserialize(""); }), ErrorCode::kParseError);
}

TEST(AccumulatorTest, ConcurrentReadersSeeConsistentState) {
  Accumulator acc(6, 8);
  std::atomic<bool> done{false};
  std::atomic<int> inconsistent{0};
  std::thread reader([&] {
    while (!done) {
      Accumulator snap = acc;
      if (snap.root() != snap.root_at(snap.epoch())) ++inconsistent;
    }
  });
  for (int i = 0; i < 60; ++i) acc.add(Felt(i + 1));
  done = true;
  reader.join();
  EXPECT_EQ(inconsistent, 0);
}

}  // namespace
}  // namespace zkdid
