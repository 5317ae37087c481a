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

#include "cli/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <filesystem>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include <json.hpp>

#include "cli/common.hpp"
#include "zkdid/error.hpp"
#include "zkdid/protocol.hpp"

namespace zkdid::cli {

std::optional<std::string> Step::opt(std::string_view key) const {
  for (const auto& [k, v] : opts) {
    if (k == key) return v;
  }
  return std::nullopt;
}

std::string Step::text() const {
  std::string out = action;
  for (const auto& a : args) out += " " + a;
  for (const auto& [k, v] : opts) out += " " + k + "=" + v;
  return out;
}

std::string ScenarioReport::text() const {
  if (lines.empty()) return "";
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  out += (passed() ? "pass" : "fail");
  out += " steps=" + std::to_string(lines.size()) + " asserts=" + std::to_string(asserts);
  if (!passed()) out += " failures=" + std::to_string(failures);
  return out + "\n";
}

namespace {

enum class Kind { kHolder, kIssuer, kVerifier };

std::optional<uint64_t> parse_u64(std::string_view s) {
  uint64_t v = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || end != s.data() + s.size()) return std::nullopt;
  return v;
}

bool valid_name(std::string_view s) {
  return !s.empty() && s != "ledger" &&
         std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'; });
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    const size_t pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

bool is_reason_name(std::string_view name) {
  try {
    parse_reject_reason(name);
    return true;
  } catch (const Error&) {
  }
  for (int c = 0; c <= static_cast<int>(ErrorCode::kParseError); ++c) {
    if (error_code_name(static_cast<ErrorCode>(c)) == name) return true;
  }
  return false;
}

struct Predicate {
  std::string attribute;
  uint32_t threshold = 0;
};

std::optional<Predicate> parse_predicate(std::string_view s) {
  const size_t pos = s.find(">=");
  if (pos == std::string_view::npos || pos == 0) return std::nullopt;
  const auto t = parse_u64(s.substr(pos + 2));
  if (!t || *t > UINT32_MAX) return std::nullopt;
  return Predicate{std::string(s.substr(0, pos)), static_cast<uint32_t>(*t)};
}

std::optional<EpochPolicy> parse_policy(std::string_view s) {
  if (s == "current") return EpochPolicy::current_only();
  if (s.starts_with("within:")) {
    if (auto k = parse_u64(s.substr(7))) return EpochPolicy::within(*k);
  }
  return std::nullopt;
}

// Static checks: arity, option names and values, and that every name refers
// to something created earlier.
class Validator {
 public:
  void check(const Step& s) {
    line_ = s.line;
    const std::string& a = s.action;
    if (a == "params") {
      arity(s, 1, 1);
      opts(s, {});
      if (created_) fail("params must precede every create step");
      if (s.args[0] != "toy" && s.args[0] != "default") fail("params is toy or default");
    } else if (a == "create-did") {
      arity(s, 1, 1);
      opts(s, {"role", "schema", "height"});
      const std::string role = s.opt("role").value_or("holder");
      if (role != "holder" && role != "issuer") fail("role is holder or issuer");
      if ((role == "issuer") != s.opt("schema").has_value()) fail("schema is required for issuers and only for them");
      if (auto h = s.opt("height"); h && !parse_u64(*h)) fail("height must be a number");
      declare(s.args[0], role == "issuer" ? Kind::kIssuer : Kind::kHolder);
    } else if (a == "create-verifier") {
      arity(s, 1, 1);
      opts(s, {});
      declare(s.args[0], Kind::kVerifier);
    } else if (a == "configure-guardians") {
      arity(s, 1, 1);
      opts(s, {"guardians", "threshold"});
      did(s.args[0]);
      const auto g = s.opt("guardians");
      const auto t = s.opt("threshold");
      if (!g || !t) fail("guardians= and threshold= are required");
      for (const auto& name : split(*g, ',')) did(name);
      if (auto v = parse_u64(*t); !v || *v > 255) fail("threshold must be a number below 256");
    } else if (a == "rotate" || a == "recover-cancel") {
      arity(s, 1, 1);
      opts(s, {});
      did(s.args[0]);
    } else if (a == "recover-initiate" || a == "recover-approve" || a == "recover-finalize") {
      arity(s, 2, 2);
      opts(s, {});
      did(s.args[0]);
      did(s.args[1]);
    } else if (a == "issue") {
      arity(s, 2, 2);
      expect(s.args[0], Kind::kIssuer);
      expect(s.args[1], Kind::kHolder);
      const auto label = s.opt("as");
      if (!label) fail("issue needs as=LABEL");
      size_t attrs = 0;
      for (const auto& [k, v] : s.opts) {
        if (k == "as") continue;
        if (!parse_u64(v)) fail("attribute " + k + " must be a number");
        ++attrs;
      }
      if (attrs == 0) fail("issue needs at least one attribute");
      fresh_label(*label);
      creds_[*label] = s.args[0];
    } else if (a == "revoke") {
      arity(s, 2, 2);
      opts(s, {});
      expect(s.args[0], Kind::kIssuer);
      auto it = creds_.find(s.args[1]);
      if (it == creds_.end()) fail("unknown credential " + s.args[1]);
      if (it->second != s.args[0]) fail(s.args[1] + " was issued by " + it->second);
    } else if (a == "tick") {
      arity(s, 0, 1);
      opts(s, {});
      if (!s.args.empty() && !parse_u64(s.args[0])) fail("tick count must be a number");
    } else if (a == "present") {
      arity(s, 4, 4);
      opts(s, {"as", "policy"});
      expect(s.args[0], Kind::kHolder);
      expect(s.args[1], Kind::kVerifier);
      expect(s.args[2], Kind::kIssuer);
      if (!parse_predicate(s.args[3])) fail("predicate must look like ATTR>=T with T < 2^32");
      if (auto p = s.opt("policy"); p && !parse_policy(*p)) fail("policy is current or within:K");
      const auto label = s.opt("as");
      if (!label) fail("present needs as=LABEL");
      fresh_label(*label);
      presentations_[*label] = s.args[1];
    } else if (a == "verify") {
      arity(s, 2, 2);
      opts(s, {"nonce"});
      expect(s.args[0], Kind::kVerifier);
      if (!presentations_.contains(s.args[1])) fail("unknown presentation " + s.args[1]);
      if (auto n = s.opt("nonce"); n && *n != "request" && *n != "fresh") fail("nonce is request or fresh");
    } else if (a == "assert-accept") {
      arity(s, 0, 0);
      opts(s, {});
    } else if (a == "assert-reject") {
      arity(s, 0, 0);
      opts(s, {"reason"});
      const auto r = s.opt("reason");
      if (!r) fail("assert-reject needs reason=");
      if (!is_reason_name(*r)) fail("unknown reason " + *r);
    } else if (a == "assert-state") {
      arity(s, 1, 1);
      opts(s, {"recovery", "key", "epoch", "height", "registered"});
      if (s.opts.empty()) fail("assert-state needs at least one check");
      if (s.args[0] == "ledger") {
        for (const auto& [k, v] : s.opts) {
          if (k != "height") fail("the ledger only has height=");
        }
      } else {
        did(s.args[0]);
        if (s.opt("epoch") && kinds_[s.args[0]] != Kind::kIssuer) fail("epoch= applies to issuers");
      }
      for (const auto& [k, v] : s.opts) {
        if ((k == "epoch" || k == "height") && !parse_u64(v)) fail(k + " must be a number");
        if (k == "recovery" && v != "none" && v != "collecting" && v != "timelocked") fail("bad recovery status");
        if (k == "key" && v != "initial" && v != "changed") fail("key is initial or changed");
        if (k == "registered" && v != "yes" && v != "no") fail("registered is yes or no");
      }
    } else {
      fail("unknown action '" + a + "'");
    }
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ScriptError(line_, what); }

  void arity(const Step& s, size_t lo, size_t hi) const {
    if (s.args.size() < lo || s.args.size() > hi) {
      fail(s.action + " takes " + (lo == hi ? std::to_string(lo) : std::to_string(lo) + ".." + std::to_string(hi)) +
           " arguments");
    }
  }
  void opts(const Step& s, std::initializer_list<std::string_view> allowed) const {
    std::set<std::string> seen;
    for (const auto& [k, v] : s.opts) {
      if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) fail("unexpected option " + k);
      if (!seen.insert(k).second) fail("repeated option " + k);
    }
  }
  void declare(const std::string& name, Kind k) {
    if (!valid_name(name)) fail("bad name '" + name + "'");
    if (kinds_.contains(name)) fail(name + " already exists");
    kinds_[name] = k;
    created_ = true;
  }
  void did(const std::string& name) const {
    auto it = kinds_.find(name);
    if (it == kinds_.end()) fail("unknown name " + name);
    if (it->second == Kind::kVerifier) fail(name + " has no DID");
  }
  void expect(const std::string& name, Kind k) const {
    auto it = kinds_.find(name);
    if (it == kinds_.end()) fail("unknown name " + name);
    if (it->second != k) {
      fail(name + " is not " + (k == Kind::kIssuer ? "an issuer" : k == Kind::kHolder ? "a holder" : "a verifier"));
    }
  }
  void fresh_label(const std::string& label) const {
    if (!valid_name(label)) fail("bad label '" + label + "'");
    if (creds_.contains(label) || presentations_.contains(label) || kinds_.contains(label)) {
      fail(label + " already exists");
    }
  }

  size_t line_ = 0;
  bool created_ = false;
  std::map<std::string, Kind> kinds_;
  std::map<std::string, std::string> creds_;
  std::map<std::string, std::string> presentations_;
};

Step parse_line(std::string_view line, size_t number) {
  std::istringstream in{std::string(line)};
  Step s;
  s.line = number;
  std::string tok;
  in >> s.action;
  while (in >> tok) {
    const size_t eq = tok.find('=');
    // ATTR>=T is a positional predicate.
    if (eq == std::string::npos || (eq > 0 && tok[eq - 1] == '>')) {
      if (!s.opts.empty()) throw ScriptError(number, "positional argument after options");
      s.args.push_back(tok);
    } else {
      if (eq == 0 || eq + 1 == tok.size()) throw ScriptError(number, "malformed option '" + tok + "'");
      s.opts.emplace_back(tok.substr(0, eq), tok.substr(eq + 1));
    }
  }
  return s;
}

Script validated(Script script) {
  Validator v;
  for (const Step& s : script.steps) v.check(s);
  return script;
}

}  // namespace

Script parse_script(std::string_view text) {
  Script script;
  size_t number = 0;
  for (const auto& raw : split(text, '\n')) {
    ++number;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    script.steps.push_back(parse_line(line, number));
  }
  return validated(std::move(script));
}

Script parse_script_json(std::string_view text) {
  using nlohmann::ordered_json;
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    throw ScriptError(0, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object() || j.value("format", "") != "zkdid-scn/1" || !j.contains("steps") || !j["steps"].is_array()) {
    throw ScriptError(0, "expected {\"format\": \"zkdid-scn/1\", \"steps\": [...]}");
  }
  Script script;
  size_t number = 0;
  for (const auto& item : j["steps"]) {
    ++number;
    if (item.is_string()) {
      script.steps.push_back(parse_line(item.get<std::string>(), number));
      if (script.steps.back().action.empty()) throw ScriptError(number, "empty step");
      continue;
    }
    if (!item.is_object() || !item.contains("action") || !item["action"].is_string()) {
      throw ScriptError(number, "step needs an action");
    }
    Step s;
    s.line = number;
    s.action = item["action"].get<std::string>();
    auto scalar = [&](const ordered_json& v) {
      if (v.is_string()) return v.get<std::string>();
      if (v.is_number_unsigned()) return std::to_string(v.get<uint64_t>());
      throw ScriptError(number, "arguments are strings or unsigned numbers");
    };
    if (item.contains("args")) {
      if (!item["args"].is_array()) throw ScriptError(number, "args must be an array");
      for (const auto& a : item["args"]) s.args.push_back(scalar(a));
    }
    if (item.contains("opts")) {
      if (!item["opts"].is_object()) throw ScriptError(number, "opts must be an object");
      for (const auto& [k, v] : item["opts"].items()) s.opts.emplace_back(k, scalar(v));
    }
    script.steps.push_back(std::move(s));
  }
  return validated(std::move(script));
}

Script load_script(const std::string& path) {
  const std::string text = read_file(path);
  if (std::filesystem::path(path).extension() == ".json") return parse_script_json(text);
  return parse_script(text);
}

// ---------------------------------------------------------------------------

namespace {

struct Outcome {
  enum Kind { kOk, kAccept, kReject, kError } kind = kOk;
  std::string reason;
  std::string detail;

  bool failed() const { return kind == kReject || kind == kError; }
  std::string render() const {
    switch (kind) {
      case kOk:
        return detail.empty() ? "ok" : "ok " + detail;
      case kAccept:
        return "accept";
      case kReject:
        return "reject " + reason;
      case kError:
        return "error " + reason;
    }
    return "";
  }
};

struct Party {
  std::unique_ptr<Actor> actor;
  Issuer* issuer = nullptr;
  HolderWallet* holder = nullptr;
  Digest32 initial_root{};
  unsigned height = KeyTree::kDefaultHeight;
  std::optional<KeyTree> proposed;
  unsigned key_generations = 0;
};

struct CredentialRef {
  std::string holder;
  uint32_t slot = 0;
};

struct PresentationRef {
  PresentationRequest request;
  std::optional<Presentation> presentation;
};

class Runner {
 public:
  explicit Runner(uint64_t seed) : seed_(seed) {}

  Outcome run(const Step& s) {
    try {
      return dispatch(s);
    } catch (const Error& e) {
      return {Outcome::kError, std::string(error_code_name(e.code())), e.what()};
    }
  }

 private:
  Outcome dispatch(const Step& s) {
    const std::string& a = s.action;
    if (a == "params") {
      params_ = params_by_name(s.args[0]);
      return {};
    }
    if (a == "create-did") return create_did(s);
    if (a == "create-verifier") {
      verifiers_.emplace(s.args[0],
                         std::make_unique<Verifier>(ledger_, params_, derive_rng(seed_, "verifier/" + s.args[0])));
      return {};
    }
    if (a == "configure-guardians") {
      Party& p = party(s.args[0]);
      std::vector<Did> guardians;
      for (const auto& g : split(*s.opt("guardians"), ',')) guardians.push_back(party(g).actor->did());
      const auto t = static_cast<uint8_t>(*parse_u64(*s.opt("threshold")));
      p.actor->submit(ConfigureGuardians{p.actor->did(), guardians, t});
      return {};
    }
    if (a == "rotate") {
      Party& p = party(s.args[0]);
      KeyTree next = next_keys(s.args[0], p);
      p.actor->submit(UpdateDocument{p.actor->did(), next.root()});
      p.actor->adopt_keys(std::move(next));
      return {};
    }
    if (a == "issue") return issue(s);
    if (a == "revoke") {
      party(s.args[0]).issuer->revoke(lookup(creds_, s.args[1]).slot);
      return {Outcome::kOk, "", "epoch=" + std::to_string(party(s.args[0]).issuer->accumulator().epoch())};
    }
    if (a == "tick") {
      const uint64_t n = s.args.empty() ? 1 : *parse_u64(s.args[0]);
      for (uint64_t i = 0; i < n; ++i) ledger_.tick();
      return {Outcome::kOk, "", "height=" + std::to_string(ledger_.height())};
    }
    if (a == "present") return present(s);
    if (a == "verify") return verify(s);
    if (a == "recover-initiate" || a == "recover-approve") {
      Party& guardian = party(s.args[0]);
      Party& target = party(s.args[1]);
      const Did did = target.actor->did();
      if (a == "recover-initiate") {
        KeyTree next = next_keys(s.args[1], target);
        const Digest32 root = next.root();
        guardian.actor->submit(InitiateRecovery{did, root});
        target.proposed = std::move(next);
      } else {
        // Guardians approve whatever root is pending on the ledger.
        guardian.actor->submit(ApproveRecovery{did, ledger_.recovery_state(did).proposed_key_root});
      }
      return {Outcome::kOk, "", "status=" + status_name(ledger_.recovery_state(did).status)};
    }
    if (a == "recover-cancel") {
      Party& p = party(s.args[0]);
      p.actor->submit(CancelRecovery{p.actor->did()});
      p.proposed.reset();
      return {};
    }
    if (a == "recover-finalize") {
      Party& sender = party(s.args[0]);
      Party& target = party(s.args[1]);
      const Did did = target.actor->did();
      const Digest32 proposed = ledger_.recovery_state(did).proposed_key_root;
      sender.actor->submit(FinalizeRecovery{did});
      if (target.proposed && target.proposed->root() == proposed) {
        target.actor->adopt_keys(std::move(*target.proposed));
        target.proposed.reset();
      }
      return {};
    }
    if (a == "assert-state") return assert_state(s);
    throw Error(ErrorCode::kInvalidParams, "unhandled action " + a);
  }

  Outcome create_did(const Step& s) {
    const std::string& name = s.args[0];
    Party p;
    if (auto h = s.opt("height")) p.height = static_cast<unsigned>(std::min<uint64_t>(*parse_u64(*h), 64));
    const Seed32 seed = derive_seed(seed_, "actor/" + name);
    if (s.opt("role").value_or("holder") == "issuer") {
      auto issuer = std::make_unique<Issuer>(ledger_, seed, *s.opt("schema"), params_,
                                             derive_rng(seed_, "issuer/" + name), p.height);
      p.issuer = issuer.get();
      p.actor = std::move(issuer);
    } else {
      auto holder =
          std::make_unique<HolderWallet>(ledger_, seed, params_, derive_rng(seed_, "holder/" + name), p.height);
      p.holder = holder.get();
      p.actor = std::move(holder);
    }
    p.initial_root = p.actor->keys().root();
    const std::string did = p.actor->did().render();
    parties_.emplace(name, std::move(p));
    return {Outcome::kOk, "", did};
  }

  Outcome issue(const Step& s) {
    Party& issuer = party(s.args[0]);
    Party& holder = party(s.args[1]);
    std::vector<Attribute> attrs;
    for (const auto& [k, v] : s.opts) {
      if (k == "as") continue;
      const uint64_t value = *parse_u64(v);
      if (value > UINT32_MAX) throw Error(ErrorCode::kAttributeOutOfRange, k + " does not fit in 32 bits");
      attrs.push_back({k, static_cast<uint32_t>(value)});
    }
    IssuedCredential ic = issuer.issuer->issue(holder.actor->did(), attrs);
    Issuer* src = issuer.issuer;
    holder.holder->store(ic.credential, ic.witness, [src](const MembershipWitness& w) { return src->refresh(w); });
    creds_[*s.opt("as")] = {s.args[1], ic.credential.slot};
    return {Outcome::kOk, "",
            "slot=" + std::to_string(ic.credential.slot) + " epoch=" + std::to_string(src->accumulator().epoch())};
  }

  Outcome present(const Step& s) {
    Party& holder = party(s.args[0]);
    Verifier& verifier = *lookup(verifiers_, s.args[1]);
    Party& issuer = party(s.args[2]);
    const Predicate pred = *parse_predicate(s.args[3]);
    const EpochPolicy policy = parse_policy(s.opt("policy").value_or("current")).value();
    PresentationRef& ref = presentations_[*s.opt("as")];
    ref.request = verifier.request(issuer.actor->did(), issuer.issuer->schema(), pred.attribute, pred.threshold, policy);
    ref.presentation = holder.holder->present(ref.request);
    return {Outcome::kOk, "",
            "epoch=" + std::to_string(ref.presentation->statement.epoch) +
                " bytes=" + std::to_string(presentation_bytes(*ref.presentation).size())};
  }

  Outcome verify(const Step& s) {
    Verifier& verifier = *lookup(verifiers_, s.args[0]);
    const PresentationRef& ref = lookup(presentations_, s.args[1]);
    if (!ref.presentation) throw Error(ErrorCode::kInvalidParams, s.args[1] + " was never produced");
    PresentationRequest req = ref.request;
    if (s.opt("nonce").value_or("request") == "fresh") {
      req = verifier.request(req.issuer, req.schema, req.attribute, req.threshold, req.policy);
    }
    const Decision d = verifier.verify(req, *ref.presentation);
    if (d.accepted()) return {Outcome::kAccept, "", ""};
    return {Outcome::kReject, std::string(reject_reason_name(d.reason)), d.detail};
  }

  Outcome assert_state(const Step& s) {
    std::vector<std::string> wrong;
    auto check = [&](const std::string& key, const std::string& want, const std::string& got) {
      if (want != got) wrong.push_back(key + "=" + got);
    };
    for (const auto& [k, v] : s.opts) {
      if (k == "height") {
        check(k, v, std::to_string(ledger_.height()));
        continue;
      }
      const Party& p = party(s.args[0]);
      const Did did = p.actor->did();
      if (k == "registered") {
        check(k, v, ledger_.is_registered(did) ? "yes" : "no");
      } else if (k == "recovery") {
        check(k, v, status_name(ledger_.recovery_state(did).status));
      } else if (k == "key") {
        check(k, v, ledger_.resolve_did(did).active_key_root == p.initial_root ? "initial" : "changed");
      } else if (k == "epoch") {
        check(k, v, std::to_string(ledger_.current_root(did).epoch));
      }
    }
    if (wrong.empty()) return {};
    std::string got;
    for (const auto& w : wrong) got += (got.empty() ? "" : " ") + w;
    return {Outcome::kReject, "AssertionFailed", got};
  }

  static std::string status_name(RecoveryStatus st) {
    switch (st) {
      case RecoveryStatus::kNone:
        return "none";
      case RecoveryStatus::kCollecting:
        return "collecting";
      case RecoveryStatus::kTimeLocked:
        return "timelocked";
    }
    return "?";
  }

  KeyTree next_keys(const std::string& name, Party& p) {
    ++p.key_generations;
    return KeyTree(derive_seed(seed_, "keys/" + name + "/" + std::to_string(p.key_generations)), p.height);
  }

  template <typename M>
  static typename M::mapped_type& lookup(M& map, const std::string& name) {
    auto it = map.find(name);
    if (it == map.end()) throw Error(ErrorCode::kInvalidParams, name + " was never created");
    return it->second;
  }
  Party& party(const std::string& name) { return lookup(parties_, name); }

  uint64_t seed_;
  ProofParams params_ = ProofParams::standard();
  Ledger ledger_;
  std::map<std::string, Party> parties_;
  std::map<std::string, std::unique_ptr<Verifier>> verifiers_;
  std::map<std::string, CredentialRef> creds_;
  std::map<std::string, PresentationRef> presentations_;
};

bool matches(const Outcome& o, std::string_view reason) { return o.failed() && o.reason == reason; }

}  // namespace

ScenarioReport run_scenario(const Script& script, uint64_t seed) {
  ScenarioReport report;
  Runner runner(seed);
  std::optional<Outcome> last;
  for (size_t i = 0; i < script.steps.size(); ++i) {
    const Step& s = script.steps[i];
    std::string line = "L" + std::to_string(s.line) + " " + s.text() + " => ";
    if (s.action == "assert-accept" || s.action == "assert-reject") {
      ++report.asserts;
      const bool want_accept = s.action == "assert-accept";
      const bool ok = last && (want_accept ? !last->failed() : matches(*last, *s.opt("reason")));
      line += ok ? "pass" : "FAIL got " + (last ? last->render() : std::string("nothing"));
      if (!ok) ++report.failures;
      last.reset();
      report.lines.push_back(line);
      continue;
    }
    const Outcome o = runner.run(s);
    if (s.action == "assert-state") {
      ++report.asserts;
      if (o.failed()) {
        line += "FAIL " + (o.reason == "AssertionFailed" ? o.detail : o.render());
        ++report.failures;
      } else {
        line += "pass";
      }
      last.reset();
      report.lines.push_back(line);
      continue;
    }
    line += o.render();
    const bool checked = i + 1 < script.steps.size() && (script.steps[i + 1].action == "assert-reject" ||
                                                         script.steps[i + 1].action == "assert-accept");
    if (o.failed() && !checked) {
      line += " (unchecked)";
      ++report.failures;
    }
    report.lines.push_back(line);
    last = o;
  }
  return report;
}

}  // namespace zkdid::cli
