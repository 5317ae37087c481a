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

// Acceptance run: one line per criterion, exit status 0 only if all pass.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <CLI11.hpp>

#include "cli/bench.hpp"
#include "cli/common.hpp"
#include "cli/scenario.hpp"
#include "interleavings.hpp"
#include "test_util.hpp"
#include "zkdid/accumulator.hpp"
#include "zkdid/error.hpp"
#include "zkdid/fri.hpp"
#include "zkdid/protocol.hpp"

namespace fs = std::filesystem;
using namespace zkdid;
using zkdid::testing::random_instance;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int prec = 1) {
  std::ostringstream o;
  o.setf(std::ios::fixed);
  o.precision(prec);
  o << v;
  return o.str();
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  throw std::runtime_error("expected an error");
}

Seed32 seed_of(uint64_t n) {
  Seed32 s{};
  for (int i = 0; i < 8; ++i) s[i] = static_cast<uint8_t>(n >> (8 * i));
  s[31] = 0x3c;
  return s;
}

bool contains(std::span<const uint8_t> hay, std::span<const uint8_t> needle) {
  return std::search(hay.begin(), hay.end(), needle.begin(), needle.end()) != hay.end();
}

std::array<uint8_t, 4> u32_be(uint32_t v) {
  return {static_cast<uint8_t>(v >> 24), static_cast<uint8_t>(v >> 16), static_cast<uint8_t>(v >> 8),
          static_cast<uint8_t>(v)};
}

// Issuer, holder and verifier on one ledger.
struct World {
  World(ProofParams p, uint64_t base, unsigned issuer_height = 10)
      : params(p),
        issuer(ledger, seed_of(base), "credit/v1", p, Rng(base + 1), issuer_height),
        holder(ledger, seed_of(base + 2), p, Rng(base + 3), 4),
        verifier(ledger, p, Rng(base + 4)) {}

  void give(uint32_t score) {
    IssuedCredential ic = issuer.issue(holder.did(), {{"creditScore", score}});
    holder.store(ic.credential, ic.witness, [this](const MembershipWitness& w) { return issuer.refresh(w); });
  }
  PresentationRequest request(uint32_t threshold, EpochPolicy policy = EpochPolicy::current_only()) {
    return verifier.request(issuer.did(), "credit/v1", "creditScore", threshold, policy);
  }

  ProofParams params;
  Ledger ledger;
  Issuer issuer;
  HolderWallet holder;
  Verifier verifier;
};

// 1. DeFi credit flow at default parameters.
Outcome defi_flow() {
  const auto t0 = Clock::now();
  World w(ProofParams::standard(), 100);
  w.give(750);
  const PresentationRequest req = w.request(700);
  const Presentation pres = w.holder.present(req);
  const Decision first = w.verifier.verify(req, pres);
  const uint64_t epoch = w.ledger.current_root(w.issuer.did()).epoch;
  w.issuer.revoke(w.holder.credentials()[0].credential.slot);
  const bool bumped = w.ledger.current_root(w.issuer.did()).epoch == epoch + 1;
  const ErrorCode again = code_of([&] { w.holder.present(w.request(700)); });
  const ErrorCode again_within = code_of([&] { w.holder.present(w.request(700, EpochPolicy::within(5))); });
  const Decision stale = verify_presentation(w.ledger, req, pres);
  const double flow_s = seconds_since(t0);

  const auto t1 = Clock::now();
  const auto script = cli::load_script(std::string(ZKDID_SOURCE_DIR) + "/scenarios/defi_credit.scn");
  const cli::ScenarioReport rep = cli::run_scenario(script, 1);
  const double scn_s = seconds_since(t1);

  Outcome o;
  o.pass = first.accepted() && bumped && again == ErrorCode::kRevoked && again_within == ErrorCode::kRevoked &&
           stale.reason == RejectReason::kStaleRoot && flow_s < 60 && rep.passed() && scn_s < 60;
  o.detail = "750>=700 " + std::string(first.accepted() ? "Accept" : reject_reason_name(first.reason)) +
             ", after revoke present=" + std::string(error_code_name(again)) + "/" +
             std::string(error_code_name(again_within)) + " old=" + std::string(reject_reason_name(stale.reason)) +
             ", flow " + fmt(flow_s) + " s, scenario " + (rep.passed() ? "pass" : "FAIL") + " " + fmt(scn_s) + " s";
  return o;
}

// 2. Honest proofs verify at both parameter sets.
Outcome completeness() {
  std::string detail;
  bool pass = true;
  for (const ProofParams& p : {ProofParams::toy(), ProofParams::standard()}) {
    int ok = 0;
    for (uint64_t i = 0; i < 100; ++i) {
      std::mt19937_64 gen(2000 + i);
      // The toy trace only has room for a single attribute.
      const unsigned count = p == ProofParams::toy() ? 1 : 1 + static_cast<unsigned>(gen() % 3);
      const unsigned index = static_cast<unsigned>(gen() % count);
      const auto in = random_instance(p.air, gen, count, index);
      const StarkProof proof = prove(in.stmt, in.wit, p, i);
      ok += verify(in.stmt, proof) && verify(in.stmt, decode_proof(encode_proof(proof)));
    }
    pass &= ok == 100;
    detail += (detail.empty() ? "" : ", ") + cli::params_name(p) + " " + std::to_string(ok) + "/100";
  }
  return {pass, detail};
}

// 3. Tampered proofs and substituted nonces never pass.
Outcome soundness() {
  std::mt19937_64 gen(3000);
  const auto in = random_instance(AirConfig::standard(), gen);
  const Bytes honest = encode_proof(prove(in.stmt, in.wit, ProofParams::standard(), 3));
  int accepted = 0, decode_errors = 0;
  for (int i = 0; i < 1000; ++i) {
    Bytes b = honest;
    const size_t bit = gen() % (b.size() * 8);
    b[bit / 8] ^= static_cast<uint8_t>(1u << (bit % 8));
    try {
      accepted += verify(in.stmt, decode_proof(b));
    } catch (const DecodeError&) {
      ++decode_errors;
    }
  }

  World w(ProofParams::standard(), 300, 6);
  w.give(640);
  int honest_ok = 0, mismatch = 0, rewritten = 0;
  for (int i = 0; i < 10; ++i) {
    const PresentationRequest req = w.request(600);
    const Presentation pres = w.holder.present(req);
    honest_ok += verify_presentation(w.ledger, req, pres).accepted();
    for (int j = 0; j < 10; ++j) {
      const PresentationRequest other = w.request(600);
      mismatch += verify_presentation(w.ledger, other, pres).reason == RejectReason::kNonceMismatch;
      Presentation forged = pres;
      forged.statement.nonce = other.nonce;
      rewritten += verify_presentation(w.ledger, other, forged).reason == RejectReason::kInvalidProof;
    }
  }
  Outcome o;
  o.pass = accepted == 0 && honest_ok == 10 && mismatch == 100 && rewritten == 100;
  o.detail = "bit flips accepted " + std::to_string(accepted) + "/1000 (decode errors " +
             std::to_string(decode_errors) + "), substituted nonce NonceMismatch " + std::to_string(mismatch) +
             "/100, rewritten nonce InvalidProof " + std::to_string(rewritten) + "/100";
  return o;
}

// 4. Toy range check against integer enumeration. With the hash lane fixed by
// the commitment and root, the free cells touching the comparison are the
// 4 + 4 range bits.
Outcome toy_exhaustive() {
  const auto cfg = AirConfig::toy();
  std::mt19937_64 gen(4000);
  Rng rng(4000);
  const unsigned bits = cfg.range_bits;
  int pairs = 0, mismatches = 0;
  for (uint32_t v = 0; v < 16; ++v) {
    auto in = random_instance(cfg, gen);
    in.wit.attrs[0] = v;
    in.stmt.accumulator_root =
        alg_path_root(commit_attributes(in.wit.attrs, in.wit.salt, cfg.mimc()), in.wit.path, cfg.mimc());
    auto base_stmt = in.stmt;
    base_stmt.threshold = 0;
    const Trace base = build_trace(base_stmt, in.wit, cfg, rng);
    for (uint32_t t = 0; t < 16; ++t) {
      ++pairs;
      in.stmt.threshold = t;
      const auto cs = predicate_constraints(in.stmt, cfg);
      bool oracle = false;
      for (uint64_t d = 0; d < 16; ++d) oracle |= (Felt(v) - Felt(t) - Felt(d)).is_zero();
      int passing = 0;
      for (uint32_t assign = 0; assign < 256; ++assign) {
        Trace tr = base;
        const uint64_t vb = assign & 15, db = assign >> 4;
        for (size_t r = 0; r < bits; ++r) {
          const unsigned shift = bits - 1 - static_cast<unsigned>(r);
          tr.column("v_bit")[r] = Felt((vb >> shift) & 1);
          tr.column("v_acc")[r] = Felt(vb >> shift);
          tr.column("d_bit")[r] = Felt((db >> shift) & 1);
          tr.column("d_acc")[r] = Felt(db >> shift);
        }
        passing += check_trace(tr, cs).ok;
      }
      bool built = true;
      try {
        built = check_trace(build_trace(in.stmt, in.wit, cfg, rng), cs).ok;
      } catch (const Error& e) {
        built = false;
        if (e.code() != ErrorCode::kPredicateUnsatisfied) ++mismatches;
      }
      if (oracle != (v >= t) || passing != (oracle ? 1 : 0) || built != oracle) ++mismatches;
    }
  }
  return {pairs == 256 && mismatches == 0,
          std::to_string(pairs) + " (v, T) pairs x 256 bit assignments, " + std::to_string(mismatches) +
              " disagreements with integer enumeration"};
}

EvalDomain lde(unsigned log_size) { return EvalDomain::coset(log_size, Felt(7)); }

// 5. FRI rejects far functions and folding halves degree.
Outcome fri_checks() {
  int rejected = 0;
  for (uint64_t seed = 0; seed < 100; ++seed) {
    std::mt19937_64 gen(5000 + seed);
    const EvalDomain d = lde(10);
    std::vector<Felt> ev(d.size());
    for (auto& v : ev) v = Felt(gen());
    Transcript t("fri");
    Rng rng(seed);
    auto com = fri_commit(ev, d, d.size() / 8, t, rng);
    const FriProof proof = com.open(fri_query_indices(t, 30, d.size()));
    Transcript v("fri");
    rejected += !fri_verify(proof, d, d.size() / 8, 30, v, [](size_t, uint32_t, Felt) { return true; });
  }

  std::mt19937_64 gen(5500);
  int folds = 0, bad = 0;
  for (unsigned log = 1; log <= 6; ++log) {
    const EvalDomain d = lde(log);
    const EvalDomain sq{log - 1, d.offset.square(), d.generator.square()};
    for (size_t k = 1; k <= d.size(); ++k) {
      std::vector<Felt> coeffs(d.size());
      for (size_t i = 0; i < k; ++i) coeffs[i] = Felt(gen());
      coeffs[k - 1] = Felt(1 + gen() % (Felt::kModulus - 1));
      const Felt beta(1 + gen() % (Felt::kModulus - 1));
      const auto folded = fri_fold_layer(ntt(coeffs, d), d, beta);
      std::vector<Felt> expect(d.size() / 2);
      for (size_t i = 0; i < expect.size(); ++i) expect[i] = coeffs[2 * i] + beta * coeffs[2 * i + 1];
      const auto interp = intt(folded, sq);
      ++folds;
      if (interp != expect || degree_bound(interp) > (k + 1) / 2) ++bad;
    }
  }
  return {rejected >= 99 && bad == 0,
          "far functions rejected " + std::to_string(rejected) + "/100, " + std::to_string(folds) +
              " folds on domains 2..64 match interpolation (" + std::to_string(bad) + " bad)"};
}

using u128 = unsigned __int128;
constexpr uint64_t kP = Felt::kModulus;

uint64_t oracle_mul(uint64_t a, uint64_t b) { return static_cast<uint64_t>((u128{a} * b) % kP); }
uint64_t oracle_pow(uint64_t a, uint64_t e) {
  uint64_t acc = 1;
  while (e) {
    if (e & 1) acc = oracle_mul(acc, a);
    a = oracle_mul(a, a);
    e >>= 1;
  }
  return acc;
}

std::vector<Felt> naive_dft(const std::vector<Felt>& c, const EvalDomain& d) {
  std::vector<Felt> out;
  for (size_t i = 0; i < d.size(); ++i) {
    Felt acc, x = d.element(i), xp = Felt::one();
    for (Felt ci : c) {
      acc += ci * xp;
      xp *= x;
    }
    out.push_back(acc);
  }
  return out;
}

// 6. Field arithmetic and NTT against independent oracles.
Outcome field_checks() {
  std::mt19937_64 gen(6000);
  const uint64_t edges[] = {0, 1, 2, kP - 1, kP - 2, 0xffffffff, 0x100000000, kP >> 1};
  auto sample = [&] { return gen() % 4 == 0 ? edges[gen() % 8] : gen() % kP; };
  int ops = 0, bad = 0;
  for (int i = 0; i < 10000; ++i) {
    const uint64_t a = sample(), b = sample(), e = gen();
    const Felt fa(a), fb(b);
    bad += (fa + fb).value() != static_cast<uint64_t>((u128{a} + b) % kP);
    bad += (fa - fb).value() != static_cast<uint64_t>((u128{a} + kP - b) % kP);
    bad += (fa * fb).value() != oracle_mul(a, b);
    bad += fa.pow(e).value() != oracle_pow(a, e);
    if (a != 0) bad += fa.inverse().value() != oracle_pow(a, kP - 2);
    ops += a != 0 ? 5 : 4;
  }
  int rounds = 0, ntt_bad = 0;
  for (unsigned log = 0; log <= 12; ++log) {
    for (Felt off : {Felt::one(), Felt(7)}) {
      const EvalDomain d = EvalDomain::coset(log, off);
      std::vector<Felt> v(d.size());
      for (auto& x : v) x = Felt(gen());
      ntt_bad += intt(ntt(v, d), d) != v;
      ntt_bad += ntt(intt(v, d), d) != v;
      ++rounds;
    }
  }
  int dft_bad = 0;
  for (Felt off : {Felt::one(), Felt(7)}) {
    const EvalDomain d = EvalDomain::coset(3, off);
    std::vector<Felt> c(8);
    for (auto& x : c) x = Felt(gen());
    dft_bad += ntt(c, d) != naive_dft(c, d);
  }
  return {bad == 0 && ntt_bad == 0 && dft_bad == 0,
          std::to_string(ops) + " ops vs 128-bit oracle (" + std::to_string(bad) + " bad), intt(ntt) on " +
              std::to_string(rounds) + " domains up to 4096 (" + std::to_string(ntt_bad) +
              " bad), size-8 DFT " + (dft_bad ? "differs" : "matches")};
}

// 7. Accumulator against a from-scratch rebuild and ground-truth membership.
Outcome accumulator_checks() {
  const unsigned depth = 10;
  Accumulator acc(depth);
  const MimcParams& m = acc.mimc();
  std::vector<Felt> leaves(size_t{1} << depth);
  std::vector<std::vector<Felt>> leaves_at{leaves};
  std::map<uint32_t, std::pair<MembershipWitness, Felt>> last_witness;
  std::vector<std::pair<MembershipWitness, Felt>> sampled;
  std::mt19937_64 gen(7000);
  int root_bad = 0, truth_checks = 0, truth_bad = 0;
  for (int step = 0; step < 1000; ++step) {
    const auto occ = acc.occupied();
    if (occ.empty() || gen() % 3 != 0) {
      const Felt c(1 + gen() % (kP - 1));
      leaves[acc.add(c)] = c;
    } else {
      auto it = occ.begin();
      std::advance(it, gen() % occ.size());
      acc.revoke(it->first);
      leaves[it->first] = Felt(0);
    }
    leaves_at.push_back(leaves);
    root_bad += acc.root() != alg_root(leaves, depth, m);

    for (uint32_t s = 0; s < acc.slots_used(); ++s) {
      ++truth_checks;
      const bool truth = !leaves[s].is_zero();
      if (truth) {
        const MembershipWitness w = acc.witness(s);
        truth_bad += !alg_verify(acc.root(), leaves[s], w.path, m) || w.epoch != acc.epoch();
        last_witness[s] = {w, leaves[s]};
      } else {
        const auto& [w, c] = last_witness.at(s);
        truth_bad += alg_verify(acc.root(), c, w.path, m);
        bool refused = false;
        try {
          acc.refresh(w);
        } catch (const Error& e) {
          refused = e.code() == ErrorCode::kSlotNotOccupied;
        }
        truth_bad += !refused;
      }
    }
    const auto now = acc.occupied();
    for (int k = 0; k < 3 && !now.empty(); ++k) {
      auto it = now.begin();
      std::advance(it, gen() % now.size());
      sampled.emplace_back(acc.witness(it->first), it->second);
    }
  }
  for (size_t e = 0; e < leaves_at.size(); ++e) root_bad += acc.root_at(e) != alg_root(leaves_at[e], depth, m);
  // A witness from epoch w verifies at epoch e exactly when the tree is unchanged.
  int history_bad = 0;
  for (const auto& [w, c] : sampled) {
    for (int k = 0; k < 50; ++k) {
      const uint64_t e = gen() % (acc.epoch() + 1);
      history_bad += (leaves_at[e] == leaves_at[w.epoch]) != alg_verify(acc.root_at(e), c, w.path, m);
    }
  }
  return {root_bad == 0 && truth_bad == 0 && history_bad == 0,
          "1000 steps at depth 10, root mismatches " + std::to_string(root_bad) + ", " +
              std::to_string(truth_checks) + " (slot, epoch) witness checks (" + std::to_string(truth_bad) +
              " wrong), " + std::to_string(sampled.size() * 50) + " historical checks (" +
              std::to_string(history_bad) + " wrong)"};
}

struct Party {
  Party(uint64_t n, unsigned height = 5) : keys(seed_of(n), height), did(Did::from_key_root(keys.root())) {}
  Tx tx(TxPayload p) { return make_tx(std::move(p), did, keys); }
  KeyTree keys;
  Did did;
};

// 8. Social recovery: threshold, time lock, cancellation, adversarial schedules.
Outcome recovery_checks() {
  std::vector<std::string> failures;
  auto expect = [&](bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  };
  auto fresh = [](uint64_t base, Ledger& ledger, Party& holder, std::vector<Party>& gs) {
    for (int i = 0; i < 5; ++i) gs.emplace_back(base + 1 + i);
    for (Party& g : gs) ledger.submit(g.tx(RegisterDid{g.keys.root(), {}, 0}));
    std::vector<Did> dids;
    for (Party& g : gs) dids.push_back(g.did);
    ledger.submit(holder.tx(RegisterDid{holder.keys.root(), dids, 3}));
    ledger.tick();
  };

  {
    Ledger ledger(LedgerConfig{100});
    Party holder(8000);
    std::vector<Party> gs;
    fresh(8000, ledger, holder, gs);
    const Digest32 proposed = KeyTree(seed_of(8099), 4).root();
    ledger.submit(gs[0].tx(InitiateRecovery{holder.did, proposed}));
    ledger.submit(gs[2].tx(ApproveRecovery{holder.did, proposed}));
    expect(ledger.recovery_state(holder.did).status == RecoveryStatus::kCollecting, "locked before 3 approvals");
    ledger.submit(gs[4].tx(ApproveRecovery{holder.did, proposed}));
    const RecoveryState rs = ledger.recovery_state(holder.did);
    expect(rs.status == RecoveryStatus::kTimeLocked && rs.locked_at == ledger.height(), "not locked at 3rd approval");
    for (int i = 0; i < 99; ++i) ledger.tick();
    expect(code_of([&] { ledger.submit(gs[1].tx(FinalizeRecovery{holder.did})); }) ==
               ErrorCode::kTimelockNotElapsed,
           "finalize at timelock - 1");
    ledger.tick();
    ledger.submit(gs[1].tx(FinalizeRecovery{holder.did}));
    expect(ledger.resolve_did(holder.did).active_key_root == proposed, "key not replaced at the boundary");
  }
  {
    Ledger ledger(LedgerConfig{100});
    Party holder(8100);
    std::vector<Party> gs;
    fresh(8100, ledger, holder, gs);
    const Digest32 original = holder.keys.root();
    const Digest32 proposed = KeyTree(seed_of(8199), 4).root();
    ledger.submit(gs[1].tx(InitiateRecovery{holder.did, proposed}));
    ledger.submit(gs[2].tx(ApproveRecovery{holder.did, proposed}));
    ledger.submit(gs[3].tx(ApproveRecovery{holder.did, proposed}));
    for (int i = 0; i < 100; ++i) ledger.tick();
    // Both in the block at the boundary; the cancel comes first and wins.
    ledger.submit(holder.tx(CancelRecovery{holder.did}));
    expect(code_of([&] { ledger.submit(gs[0].tx(FinalizeRecovery{holder.did})); }) ==
               ErrorCode::kNoPendingRecovery,
           "finalize after cancel");
    ledger.tick();
    expect(ledger.resolve_did(holder.did).active_key_root == original, "cancelled recovery changed the key");
  }

  size_t accepted = 0, rejected = 0, recoveries = 0, violations = 0;
  bool replays = true;
  for (uint64_t seed = 1; seed <= 6; ++seed) {
    const auto rep = zkdid::testing::run_interleavings(8200 + seed, 500);
    accepted += rep.accepted;
    rejected += rep.rejected;
    recoveries += rep.recoveries;
    violations += rep.violations.size();
    replays &= rep.replay_matches;
    for (const auto& v : rep.violations) failures.push_back("seed " + std::to_string(8200 + seed) + " " + v);
  }
  expect(recoveries > 0, "no recovery reached finalization in the random schedules");
  expect(replays, "replay diverged");

  std::string detail = "3-of-5 locks at 3rd approval, finalize refused at timelock-1 and allowed at 100, "
                       "cancel before finalize wins; random schedules: " +
                       std::to_string(accepted) + " accepted, " + std::to_string(rejected) + " rejected, " +
                       std::to_string(recoveries) + " recoveries, " + std::to_string(violations) + " violations";
  if (!failures.empty()) detail += "; first failure: " + failures.front();
  return {failures.empty(), detail};
}

// 9. Performance envelope at default parameters.
Outcome performance() {
  const cli::BenchResult r = cli::run_bench("default", 5, 9);
  const double ratio = r.verify_ms / r.prove_ms;
  return {r.prove_ms < 30000 && r.verify_ms < 250 && ratio < 0.05 && r.size_stable && r.all_verified,
          "prove " + fmt(r.prove_ms) + " ms, verify " + fmt(r.verify_ms) + " ms (" + fmt(100 * ratio, 2) +
              "% of prove), proof " + std::to_string(r.proof_bytes) + " B, size " +
              (r.size_stable ? "stable" : "varies") + ", " + (r.all_verified ? "all verified" : "verification failed")};
}

// Four-byte windows found at the same offset in two unrelated proofs: format
// constants such as lengths and the header.
std::set<uint32_t> structural_windows() {
  std::mt19937_64 g1(9100), g2(9200);
  const auto a = random_instance(AirConfig::standard(), g1);
  const auto b = random_instance(AirConfig::standard(), g2);
  const Bytes pa = encode_proof(prove(a.stmt, a.wit, ProofParams::standard(), 1));
  const Bytes pb = encode_proof(prove(b.stmt, b.wit, ProofParams::standard(), 2));
  std::set<uint32_t> out;
  for (size_t i = 0; i + 4 <= std::min(pa.size(), pb.size()); ++i) {
    if (std::equal(pa.begin() + i, pa.begin() + i + 4, pb.begin() + i)) {
      out.insert(uint32_t{pa[i]} << 24 | uint32_t{pa[i + 1]} << 16 | uint32_t{pa[i + 2]} << 8 | pa[i + 3]);
    }
  }
  return out;
}

struct Secrets {
  std::vector<uint32_t> attrs;
  Felt salt;
  uint32_t slot = 0;
  Did holder;
};

std::vector<Bytes> needles(const Secrets& s) {
  std::vector<Bytes> out;
  for (uint32_t a : s.attrs) {
    const auto be = u32_be(a);
    out.emplace_back(be.begin(), be.end());
    const auto f = Felt(a).to_bytes();
    out.emplace_back(f.begin(), f.end());
  }
  const auto salt = s.salt.to_bytes();
  out.emplace_back(salt.begin(), salt.end());
  const auto slot = u32_be(s.slot);
  out.emplace_back(slot.begin(), slot.end());
  out.emplace_back(s.holder.id.begin(), s.holder.id.end());
  const std::string did = s.holder.render();
  out.emplace_back(did.begin(), did.end());
  return out;
}

std::vector<std::string> text_needles(const Secrets& s) {
  std::vector<std::string> out{s.holder.render(), std::to_string(s.salt.value()), "\"salt\"", "\"slot\"",
                               "\"subject\""};
  for (uint32_t a : s.attrs) out.push_back(std::to_string(a));
  return out;
}

// 10. Presentations carry no secret. Attribute values are drawn from
// [2^31, 2^32) so that their decimal forms are ten digits long. Secrets whose
// encoding collides with public bytes are redrawn. A raw hit counts as a leak
// when it reappears in a second proof of the same witness under another seed.
Outcome privacy_scan() {
  const ProofParams params = ProofParams::standard();
  const MimcParams mimc = params.air.mimc();
  const std::set<uint32_t> structural = structural_windows();
  std::mt19937_64 gen(10000);
  int verified = 0, raw_hits = 0, leaks = 0, resampled = 0, distinct = 0, pairs_verified = 0;
  std::string first_leak;
  for (int i = 0; i < 1000; ++i) {
    PredicateStatement stmt;
    PredicateWitness wit;
    Secrets sec;
    const unsigned count = 1 + static_cast<unsigned>(gen() % 3);
    stmt.attribute_count = static_cast<uint8_t>(count);
    stmt.attribute_index = static_cast<uint8_t>(gen() % count);
    stmt.epoch = gen() % 100000;
    for (auto& b : stmt.nonce) b = static_cast<uint8_t>(gen());
    Digest32 issuer_id{};
    for (auto& b : issuer_id) b = static_cast<uint8_t>(gen());
    stmt.issuer_did = Did{issuer_id}.render();
    std::vector<Felt> siblings;
    for (unsigned j = 0; j < params.air.tree_depth; ++j) siblings.push_back(Felt(gen()));
    for (;;) {
      sec.attrs.clear();
      for (unsigned a = 0; a < count; ++a) sec.attrs.push_back(static_cast<uint32_t>((1ULL << 31) + gen() % (1ULL << 31)));
      const uint32_t v = sec.attrs[stmt.attribute_index];
      stmt.threshold = static_cast<uint32_t>(gen() % v);
      sec.salt = Felt(gen());
      sec.slot = static_cast<uint32_t>(gen() % (1u << params.air.tree_depth));
      for (auto& b : sec.holder.id) b = static_cast<uint8_t>(gen());
      wit.attrs = sec.attrs;
      wit.salt = sec.salt;
      wit.slot_index = sec.slot;
      wit.path = AlgPath{sec.slot, siblings};
      stmt.accumulator_root = alg_path_root(commit_attributes(wit.attrs, wit.salt, mimc), wit.path, mimc);
      const Bytes pub = canonical_encode(stmt);
      bool clash = false;
      for (const Bytes& n : needles(sec)) {
        clash |= contains(pub, n);
        if (n.size() == 4) clash |= structural.contains(uint32_t{n[0]} << 24 | uint32_t{n[1]} << 16 | uint32_t{n[2]} << 8 | n[3]);
      }
      if (!clash) break;
      ++resampled;
    }

    const Presentation pres{stmt, prove(stmt, wit, params, gen())};
    verified += verify(stmt, pres.proof);
    const Bytes bytes = presentation_bytes(pres);
    const std::string json = presentation_to_json(pres);
    std::vector<size_t> hit_needles;
    const auto ns = needles(sec);
    for (size_t k = 0; k < ns.size(); ++k) {
      if (contains(bytes, ns[k])) hit_needles.push_back(k);
    }
    for (const std::string& t : text_needles(sec)) {
      if (json.find(t) != std::string::npos) {
        ++leaks;
        if (first_leak.empty()) first_leak = "scenario " + std::to_string(i) + " JSON contains " + t;
      }
    }
    raw_hits += static_cast<int>(hit_needles.size());

    if (i < 50 || !hit_needles.empty()) {
      const Presentation again{stmt, prove(stmt, wit, params, gen())};
      const Bytes other = presentation_bytes(again);
      if (i < 50) {
        distinct += !std::equal(bytes.begin() + static_cast<std::ptrdiff_t>(canonical_encode(stmt).size() + kProofHeaderSize),
                                bytes.end(), other.begin() + static_cast<std::ptrdiff_t>(canonical_encode(stmt).size() + kProofHeaderSize));
        pairs_verified += verify(stmt, again.proof);
      }
      for (size_t k : hit_needles) {
        if (contains(other, ns[k])) {
          ++leaks;
          if (first_leak.empty()) {
            first_leak = "scenario " + std::to_string(i) + " needle " + std::to_string(k) + " in both proofs";
          }
        }
      }
    }
  }
  Outcome o;
  o.pass = verified == 1000 && leaks == 0 && distinct == 50 && pairs_verified == 50;
  o.detail = "1000 presentations (" + std::to_string(verified) + " verified), " + std::to_string(leaks) +
             " leaks, " + std::to_string(raw_hits) + " unconfirmed chance hits, " + std::to_string(resampled) +
             " redraws; re-proved pairs distinct " + std::to_string(distinct) + "/50, verified " +
             std::to_string(pairs_verified) + "/50";
  if (!first_leak.empty()) o.detail += "; " + first_leak;
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string quote(const std::string& s) { return "'" + s + "'"; }

int shell(const std::string& cmd) { return std::system((cmd + " >/dev/null 2>&1").c_str()); }

// Runs the CLI pipeline in `dir`; returns every produced file concatenated.
std::string cli_pipeline(const fs::path& dir, const std::string& seed) {
  const std::string z = quote(ZKDID_CLI_PATH) + " --seed " + seed + " ";
  auto p = [&](const char* f) { return quote((dir / f).string()); };
  const std::string L = p("ledger.log");
  bool ok = shell(z + "keygen --name i --height 4 --out " + p("i.key")) == 0;
  ok &= shell(z + "keygen --name h --height 3 --out " + p("h.key")) == 0;
  ok &= shell(z + "issuer init --ledger " + L + " --key " + p("i.key") +
              " --schema credit/v1 --params default --state " + p("i.issuer")) == 0;
  ok &= shell(z + "did register --ledger " + L + " --key " + p("h.key")) == 0;
  const std::string issuer = cli::KeyFile::load((dir / "i.key").string()).did.render();
  const std::string holder = cli::KeyFile::load((dir / "h.key").string()).did.render();
  ok &= shell(z + "issue --ledger " + L + " --key " + p("i.key") + " --state " + p("i.issuer") + " --subject " +
              holder + " --attr creditScore=700 --out " + p("c.json")) == 0;
  ok &= shell(z + "ledger tick --ledger " + L) == 0;
  ok &= shell(z + "request --issuer " + issuer + " --schema credit/v1 --attr creditScore --gte 650 --out " +
              p("r.json")) == 0;
  ok &= shell(z + "present --ledger " + L + " --key " + p("h.key") + " --credential " + p("c.json") +
              " --request " + p("r.json") + " --params default --out " + p("p.json")) == 0;
  ok &= shell(z + "verify --ledger " + L + " --request " + p("r.json") + " --presentation " + p("p.json") +
              " --params default") == 0;
  if (!ok) return {};
  std::string all;
  for (const char* f : {"i.key", "h.key", "i.issuer", "ledger.log", "c.json", "r.json", "p.json"}) {
    all += slurp(dir / f);
  }
  return all;
}

// 11. Same seed, same bytes: in process and across separate CLI processes.
Outcome determinism() {
  std::mt19937_64 gen(11000);
  const auto in = random_instance(AirConfig::standard(), gen);
  const bool proofs_equal = encode_proof(prove(in.stmt, in.wit, ProofParams::standard(), 77)) ==
                            encode_proof(prove(in.stmt, in.wit, ProofParams::standard(), 77));

  auto world_bytes = [] {
    World w(ProofParams::toy(), 1100, 6);
    w.give(12);
    w.holder.present(w.request(10));
    w.issuer.revoke(0);
    w.ledger.tick();
    return w.ledger.serialize();
  };
  const bool ledgers_equal = world_bytes() == world_bytes();

  const fs::path root = fs::temp_directory_path() / ("zkdid-acceptance-" + std::to_string(::getpid()));
  fs::remove_all(root);
  for (const char* d : {"a", "b", "c"}) fs::create_directories(root / d);
  const std::string a = cli_pipeline(root / "a", "21");
  const std::string b = cli_pipeline(root / "b", "21");
  const std::string c = cli_pipeline(root / "c", "22");

  const std::string scn = quote(std::string(ZKDID_SOURCE_DIR) + "/scenarios/recovery_3of5.scn");
  const std::string z = quote(ZKDID_CLI_PATH) + " --seed 5 scenario " + scn + " --report ";
  const bool ran = shell(z + quote((root / "r1.txt").string())) == 0 && shell(z + quote((root / "r2.txt").string())) == 0;
  const std::string r1 = slurp(root / "r1.txt"), r2 = slurp(root / "r2.txt");
  fs::remove_all(root);

  const bool cli_equal = !a.empty() && a == b;
  const bool seed_matters = !c.empty() && c != a;
  const bool reports_equal = ran && !r1.empty() && r1 == r2;
  return {proofs_equal && ledgers_equal && cli_equal && seed_matters && reports_equal,
          std::string("proof bytes ") + (proofs_equal ? "equal" : "differ") + ", ledger bytes " +
              (ledgers_equal ? "equal" : "differ") + ", CLI files across processes " +
              (cli_equal ? "equal" : "differ") + " (" + std::to_string(a.size()) + " B, other seed " +
              (seed_matters ? "differs" : "does not differ") + "), scenario reports " +
              (reports_equal ? "equal" : "differ")};
}

struct Criterion {
  int id;
  const char* title;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"zkdid acceptance run"};
  std::vector<int> only;
  app.add_option("--only", only, "Criterion numbers to run");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria = {
      {1, "DeFi credit flow end to end", defi_flow},
      {2, "completeness at toy and default parameters", completeness},
      {3, "soundness against bit flips and nonce substitution", soundness},
      {4, "toy range check matches exhaustive enumeration", toy_exhaustive},
      {5, "FRI far-function rejection and fold degree", fri_checks},
      {6, "field and NTT against oracles", field_checks},
      {7, "accumulator rebuild equality and witness validity", accumulator_checks},
      {8, "guardian recovery rules", recovery_checks},
      {9, "performance envelope at default parameters", performance},
      {10, "presentations reveal no secrets", privacy_scan},
      {11, "deterministic given a seed", determinism},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.title << ": " << o.detail << " ("
              << fmt(seconds_since(t0)) << " s)" << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
