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
#include <string_view>

#include <json.hpp>

#include "zkdid/identity.hpp"
#include "zkdid/rng.hpp"
#include "zkdid/stark.hpp"

namespace zkdid::cli {

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitUsage = 2 };

/// Every random choice the CLI makes is a labelled child of the run seed.
Rng derive_rng(uint64_t seed, std::string_view label);
Seed32 derive_seed(uint64_t seed, std::string_view label);

/// "toy" or "default". Throws InvalidParams.
ProofParams params_by_name(std::string_view name);
std::string params_name(const ProofParams& p);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);
nlohmann::json read_json(const std::string& path);

/// Key file, format "zkdid-key/1". Holds the seed in the clear.
struct KeyFile {
  std::string name;
  Did did;
  Seed32 seed{};
  unsigned height = KeyTree::kDefaultHeight;
  uint32_t next_index = 0;

  KeyTree tree() const { return KeyTree(seed, height, next_index); }
  static KeyFile load(const std::string& path);
  void save(const std::string& path) const;
};

/// Issuer state file, format "zkdid-issuer/1".
struct IssuerFile {
  Did did;
  std::string schema;
  std::string params;
  std::string accumulator;

  static IssuerFile load(const std::string& path);
  void save(const std::string& path) const;
};

}  // namespace zkdid::cli
