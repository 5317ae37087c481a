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
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace zkdid::cli {

/// One action. `line` is the source line for text scripts and the 1-based
/// step number for JSON scripts.
struct Step {
  size_t line = 0;
  std::string action;
  std::vector<std::string> args;
  std::vector<std::pair<std::string, std::string>> opts;

  std::optional<std::string> opt(std::string_view key) const;
  /// action, args, then key=value options, space separated.
  std::string text() const;
};

struct Script {
  std::vector<Step> steps;
};

class ScriptError : public std::runtime_error {
 public:
  ScriptError(size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  size_t line() const { return line_; }

 private:
  size_t line_;
};

/// Text form: one action per line, '#' starts a comment.
///
///   params toy|default
///   create-did NAME [role=holder|issuer] [schema=S] [height=H]
///   create-verifier NAME
///   configure-guardians NAME guardians=A,B,.. threshold=T
///   rotate NAME
///   issue ISSUER HOLDER ATTR=VALUE.. as=CRED
///   revoke ISSUER CRED
///   tick [N]
///   present HOLDER VERIFIER ISSUER ATTR>=T as=PRES [policy=current|within:K]
///   verify VERIFIER PRES [nonce=request|fresh]
///   recover-initiate GUARDIAN TARGET
///   recover-approve GUARDIAN TARGET
///   recover-cancel TARGET
///   recover-finalize SENDER TARGET
///   assert-accept
///   assert-reject reason=R
///   assert-state NAME|ledger [recovery=none|collecting|timelocked] [key=initial|changed]
///                [epoch=N] [height=N] [registered=yes|no]
///
/// Names must be created before use. Throws ScriptError.
Script parse_script(std::string_view text);
/// {"format": "zkdid-scn/1", "steps": [...]}; a step is either a text line
/// or {"action", "args", "opts"}. Throws ScriptError.
Script parse_script_json(std::string_view text);
/// Picks the parser from the extension (.json or anything else). Throws
/// ScriptError, or Error(IoError).
Script load_script(const std::string& path);

struct ScenarioReport {
  std::vector<std::string> lines;
  size_t asserts = 0;
  size_t failures = 0;

  bool passed() const { return failures == 0; }
  /// One line per step, then a summary unless the script was empty.
  std::string text() const;
};

/// Runs against a fresh ledger. Any reject or error not followed by an
/// assert-reject counts as a failure.
ScenarioReport run_scenario(const Script& script, uint64_t seed);

}  // namespace zkdid::cli
