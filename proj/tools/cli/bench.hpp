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
#include <string>
#include <vector>

namespace zkdid::cli {

struct BenchResult {
  std::string params;
  size_t reps = 0;
  double prove_ms = 0;   // median
  double verify_ms = 0;  // median
  size_t proof_bytes = 0;
  size_t presentation_bytes = 0;
  bool size_stable = true;
  bool all_verified = true;
  /// Ledger cost of the root publication that accompanies one issuance.
  uint64_t publish_cost_units = 0;
};

/// Issues one credential and presents it `reps` times under fresh nonces.
/// Seeds come from `seed` only; timings are the sole wall-clock input.
BenchResult run_bench(const std::string& params, size_t reps, uint64_t seed);

std::string bench_table(const std::vector<BenchResult>& results);
std::string bench_json(const std::vector<BenchResult>& results);

}  // namespace zkdid::cli
