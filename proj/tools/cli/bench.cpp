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

#include "cli/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>

#include <json.hpp>

#include "cli/common.hpp"
#include "zkdid/error.hpp"
#include "zkdid/protocol.hpp"

namespace zkdid::cli {

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return 0;
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2;
}

template <typename F>
double time_ms(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

BenchResult run_bench(const std::string& params_label, size_t reps, uint64_t seed) {
  if (reps == 0) throw Error(ErrorCode::kInvalidParams, "repetitions must be positive");
  const ProofParams params = params_by_name(params_label);
  BenchResult r;
  r.params = params_label;
  r.reps = reps;

  Ledger ledger;
  Issuer issuer(ledger, derive_seed(seed, "bench/issuer"), "credit/v1", params, derive_rng(seed, "bench/issuer-rng"),
                4);
  HolderWallet holder(ledger, derive_seed(seed, "bench/holder"), params, derive_rng(seed, "bench/holder-rng"), 4);
  Verifier verifier(ledger, params, derive_rng(seed, "bench/verifier"));
  ledger.tick();

  const auto top = static_cast<uint32_t>(params.air.value_bound() - 1);
  const uint32_t value = std::min<uint32_t>(750, top);
  IssuedCredential ic = issuer.issue(holder.did(), {{"creditScore", value}});
  holder.store(ic.credential, ic.witness);
  ledger.tick();
  for (const Tx& tx : ledger.blocks().back().txs) {
    if (std::holds_alternative<PublishRoot>(tx.payload)) r.publish_cost_units = (encode_tx(tx).size() + 31) / 32;
  }

  std::vector<double> prove_times, verify_times;
  for (size_t i = 0; i < reps; ++i) {
    const PresentationRequest req =
        verifier.request(issuer.did(), "credit/v1", "creditScore", std::min<uint32_t>(700, value));
    Presentation pres;
    prove_times.push_back(time_ms([&] { pres = holder.present(req); }));
    Decision d;
    verify_times.push_back(time_ms([&] { d = verify_presentation(ledger, req, pres, params); }));
    r.all_verified = r.all_verified && d.accepted();
    const size_t size = encode_proof(pres.proof).size();
    if (i == 0) {
      r.proof_bytes = size;
      r.presentation_bytes = presentation_bytes(pres).size();
    }
    r.size_stable = r.size_stable && size == r.proof_bytes;
  }
  r.prove_ms = median(prove_times);
  r.verify_ms = median(verify_times);
  return r;
}

std::string bench_table(const std::vector<BenchResult>& results) {
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-8s %5s %12s %12s %12s %12s %11s %8s\n", "params", "reps", "prove_ms", "verify_ms",
                "proof_bytes", "pres_bytes", "cost_units", "verified");
  out += buf;
  for (const auto& r : results) {
    std::snprintf(buf, sizeof buf, "%-8s %5zu %12.2f %12.2f %12zu %12zu %11llu %8s\n", r.params.c_str(), r.reps,
                  r.prove_ms, r.verify_ms, r.proof_bytes, r.presentation_bytes,
                  static_cast<unsigned long long>(r.publish_cost_units), r.all_verified ? "yes" : "no");
    out += buf;
  }
  return out;
}

std::string bench_json(const std::vector<BenchResult>& results) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : results) {
    arr.push_back({{"params", r.params},
                   {"reps", r.reps},
                   {"prove_ms_median", r.prove_ms},
                   {"verify_ms_median", r.verify_ms},
                   {"proof_bytes", r.proof_bytes},
                   {"presentation_bytes", r.presentation_bytes},
                   {"proof_size_stable", r.size_stable},
                   {"all_verified", r.all_verified},
                   {"publish_cost_units", r.publish_cost_units}});
  }
  return nlohmann::json{{"format", "zkdid-bench/1"}, {"results", arr}}.dump(2) + "\n";
}

}  // namespace zkdid::cli
