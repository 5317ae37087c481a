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

#include <algorithm>
#include <map>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "zkdid/error.hpp"
#include "zkdid/vdr.hpp"

namespace zkdid::testing {

struct InterleavingReport {
  std::vector<std::string> violations;
  std::map<ErrorCode, int> reasons;
  size_t accepted = 0;
  size_t rejected = 0;
  size_t recoveries = 0;
  size_t key_changes = 0;
  bool replay_matches = false;
};

// Random parties submit random txs, some signed with the wrong key, some
// mutated after signing, some replayed. Checked after every submission:
//  - a rejected tx leaves the state untouched;
//  - an active key root changes only via a controller UpdateDocument or a
//    finalize that met threshold and time lock;
//  - approvals are always a subset of the guardians.
// At the end the block list must replay to the same state.
inline InterleavingReport run_interleavings(uint64_t seed, int steps, uint64_t timelock = 4) {
  constexpr size_t kParties = 6;
  constexpr int kKeysPerParty = 3;
  InterleavingReport rep;
  std::mt19937_64 gen(seed);
  Ledger ledger(LedgerConfig{timelock});
  auto violation = [&](int step, const std::string& what) {
    rep.violations.push_back("step " + std::to_string(step) + ": " + what);
  };

  std::vector<std::vector<KeyTree>> trees(kParties);
  std::vector<Did> dids;
  for (size_t p = 0; p < kParties; ++p) {
    for (int k = 0; k < kKeysPerParty; ++k) {
      Seed32 s{};
      const uint64_t n = seed * 1000003 + 1000 * (p + 1) + k;
      for (int i = 0; i < 8; ++i) s[i] = static_cast<uint8_t>(n >> (8 * i));
      s[31] = 0x5a;
      trees[p].emplace_back(s, 7);
    }
    dids.push_back(Did::from_key_root(trees[p][0].root()));
  }
  // Half the parties start registered; the rest may register during the run.
  for (size_t p = 0; p < kParties; p += 2) {
    ledger.submit(make_tx(RegisterDid{trees[p][0].root(), {}, 0}, dids[p], trees[p][0]));
  }
  ledger.tick();
  auto tree_for_root = [&](size_t p, const Digest32& root) -> KeyTree* {
    for (KeyTree& t : trees[p]) {
      if (t.root() == root) return &t;
    }
    return nullptr;
  };
  auto pick = [&](size_t n) { return static_cast<size_t>(gen() % n); };

  std::vector<Tx> accepted;
  for (int step = 0; step < steps; ++step) {
    if (gen() % 4 == 0) {
      ledger.tick();
      continue;
    }
    const LedgerState before = ledger.snapshot();
    const uint64_t h = ledger.height();
    // Honest txs pick a plausible signer, target and key; adversarial ones
    // take whatever comes and are then tampered with.
    const bool honest = gen() % 10 < 7;
    const int kind = static_cast<int>(pick(8));
    size_t s = pick(kParties);
    size_t target = pick(kParties);
    if (honest) {
      if (kind == 1 || kind == 3 || kind == 6) target = s;
      if (kind == 4 || kind == 5) {
        std::vector<std::pair<size_t, size_t>> pairs;
        for (size_t t = 0; t < kParties; ++t) {
          auto d = before.documents.find(dids[t]);
          if (d == before.documents.end()) continue;
          for (size_t g = 0; g < kParties; ++g) {
            const auto& gs = d->second.guardians;
            if (std::find(gs.begin(), gs.end(), dids[g]) != gs.end()) pairs.emplace_back(g, t);
          }
        }
        if (!pairs.empty()) std::tie(s, target) = pairs[pick(pairs.size())];
      }
    }
    const Did& tdid = dids[target];
    const Digest32 some_root = trees[honest ? target : pick(kParties)][pick(kKeysPerParty)].root();
    std::vector<Did> gs;
    for (size_t i = 0; i < kParties; ++i) {
      const bool usable = !honest || before.documents.contains(dids[i]);
      if (i != target && usable && gen() % 2) gs.push_back(dids[i]);
    }
    const auto thr = static_cast<uint8_t>(gs.empty() ? 0 : 1 + pick(gs.size()));

    TxPayload payload;
    switch (kind) {
      case 0:
        payload = gen() % 2 ? RegisterDid{trees[s][0].root(), gs, thr} : RegisterDid{trees[s][0].root(), {}, 0};
        break;
      case 1:
        payload = UpdateDocument{tdid, some_root};
        break;
      case 2: {
        auto it = before.roots.find(dids[s]);
        const uint64_t next = it == before.roots.end() ? 0 : it->second.back().epoch + 1;
        payload = PublishRoot{!honest && gen() % 2 ? next + 1 : next, Felt(gen())};
        break;
      }
      case 3:
        payload = ConfigureGuardians{tdid, gs, thr};
        break;
      case 4:
        payload = InitiateRecovery{tdid, some_root};
        break;
      case 5: {
        auto it = before.recovery.find(tdid);
        payload = ApproveRecovery{
            tdid, it != before.recovery.end() && (honest || gen() % 2) ? it->second.proposed_key_root : some_root};
        break;
      }
      case 6:
        payload = CancelRecovery{tdid};
        break;
      default:
        payload = FinalizeRecovery{tdid};
        break;
    }

    // Signing key: the active one when honest, otherwise often stale or foreign.
    KeyTree* keys = nullptr;
    auto doc = before.documents.find(dids[s]);
    if (doc != before.documents.end() && (honest || gen() % 2)) keys = tree_for_root(s, doc->second.active_key_root);
    if (kind == 0 && (honest || gen() % 2)) keys = &trees[s][0];
    if (keys == nullptr) keys = &trees[pick(kParties)][pick(kKeysPerParty)];
    if (keys->next_index() >= keys->capacity()) continue;

    const bool early = !honest && gen() % 4 == 0;
    const bool late = !honest && h > 0 && gen() % 4 == 0;
    Tx tx = make_tx(payload, dids[s], *keys, early ? h + 1 : 0, late ? h - 1 : UINT64_MAX);
    if (!honest) {
      switch (pick(4)) {
        case 0:
          if (!accepted.empty()) tx = accepted[pick(accepted.size())];
          break;
        case 1:
          tx.signer = dids[pick(kParties)];
          break;
        case 2:
          tx.not_after ^= 1;
          break;
        default:
          break;
      }
    }

    bool ok = true;
    try {
      ledger.submit(tx);
    } catch (const Error& e) {
      ok = false;
      ++rep.reasons[e.code()];
    }
    const LedgerState after = ledger.snapshot();
    if (!ok) {
      ++rep.rejected;
      if (after != before) violation(step, "rejected tx changed state");
      continue;
    }
    ++rep.accepted;
    accepted.push_back(tx);

    for (const auto& [did, d] : after.documents) {
      auto prev = before.documents.find(did);
      if (prev == before.documents.end()) continue;
      if (prev->second.active_key_root == d.active_key_root) continue;
      ++rep.key_changes;
      if (const auto* u = std::get_if<UpdateDocument>(&tx.payload)) {
        if (u->did != did || tx.signer != did) violation(step, "key changed by a non-controller update");
        continue;
      }
      if (!std::holds_alternative<FinalizeRecovery>(tx.payload)) {
        violation(step, std::string("key changed by ") + std::string(tx_kind_name(tx.payload)));
        continue;
      }
      ++rep.recoveries;
      auto rs = before.recovery.find(did);
      if (rs == before.recovery.end()) {
        violation(step, "key recovered without a pending recovery");
        continue;
      }
      if (rs->second.status != RecoveryStatus::kTimeLocked) violation(step, "finalized before the time lock");
      if (rs->second.approvals.size() < prev->second.threshold) violation(step, "finalized below threshold");
      if (h < rs->second.locked_at + timelock) violation(step, "finalized before the time lock elapsed");
      if (d.active_key_root != rs->second.proposed_key_root) violation(step, "recovered to an unapproved key");
    }
    for (const auto& [did, rs] : after.recovery) {
      const auto& g = after.documents.at(did).guardians;
      for (const Did& a : rs.approvals) {
        if (std::find(g.begin(), g.end(), a) == g.end()) violation(step, "approval from a non-guardian");
      }
    }
  }
  ledger.tick();
  auto replayed = Ledger::replay(ledger.blocks(), LedgerConfig{timelock});
  rep.replay_matches = replayed->snapshot() == ledger.snapshot() &&
                       state_digest(replayed->snapshot()) == state_digest(ledger.sealed_snapshot());
  return rep;
}

}  // namespace zkdid::testing
