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

#include "cli/commands.hpp"

#include <filesystem>
#include <map>

#include <CLI11.hpp>
#include <json.hpp>

#include "cli/bench.hpp"
#include "cli/common.hpp"
#include "cli/scenario.hpp"
#include "zkdid/error.hpp"
#include "zkdid/protocol.hpp"

namespace zkdid::cli {

using nlohmann::json;

namespace {

struct Options {
  uint64_t seed = 0;
  std::string ledger, key, state, out, name, schema, params = "default", subject, credential, request, presentation,
      issuer_state, target, new_key, nonce, issuer, attribute, file, report, for_did, bench_params = "both";
  unsigned height = KeyTree::kDefaultHeight;
  std::vector<std::string> guardians, attrs;
  unsigned threshold = 0;
  uint32_t slot = 0;
  uint64_t gte = 0, blocks = 1;
  std::optional<uint64_t> within;
  size_t reps = 5;
  bool as_json = false;
};

std::unique_ptr<Ledger> open_ledger(const std::string& path, bool create) {
  if (create && !std::filesystem::exists(path)) return std::make_unique<Ledger>();
  return Ledger::load(path);
}

std::string hex_of(const Digest32& d) { return to_hex(d); }

uint64_t parse_number(const std::string& text, const std::string& what) {
  size_t used = 0;
  uint64_t v = 0;
  try {
    if (text.empty() || text[0] == '-' || text[0] == '+') throw std::invalid_argument("sign");
    v = std::stoull(text, &used);
  } catch (const std::exception&) {
    throw Error(ErrorCode::kParseError, what + " is not an unsigned number: " + text);
  }
  if (used != text.size()) throw Error(ErrorCode::kParseError, what + " is not an unsigned number: " + text);
  return v;
}

json credential_file(const IssuedCredential& ic) {
  return {{"format", "zkdid-credfile/1"},
          {"credential", json::parse(credential_to_json(ic.credential))},
          {"witness", json::parse(witness_to_json(ic.witness))}};
}

IssuedCredential load_credential_file(const std::string& path) {
  const json j = read_json(path);
  if (!j.is_object() || j.value("format", "") != "zkdid-credfile/1" || !j.contains("credential") ||
      !j.contains("witness")) {
    throw Error(ErrorCode::kParseError, path + ": expected a zkdid-credfile/1 document");
  }
  return {credential_from_json(j["credential"].dump()), witness_from_json(j["witness"].dump())};
}

// Restores the issuer held in a state file. The rng is keyed by the issuer and
// its current epoch, so repeated runs with one seed reproduce every salt.
std::unique_ptr<Issuer> restore_issuer(Ledger& ledger, const Options& o, KeyFile& kf, IssuerFile& f) {
  Accumulator acc = Accumulator::deserialize(f.accumulator);
  Rng rng = derive_rng(o.seed, "issuer/" + f.did.render() + "/" + std::to_string(acc.epoch()));
  return std::make_unique<Issuer>(ledger, f.did, kf.tree(), f.schema, params_by_name(f.params), std::move(acc),
                                  std::move(rng));
}

void save_issuer(const Issuer& is, IssuerFile& f, KeyFile& kf, const Options& o) {
  f.accumulator = is.accumulator().serialize();
  f.save(o.state);
  kf.next_index = is.keys().next_index();
  kf.save(o.key);
}

std::string status_name(RecoveryStatus s) {
  return s == RecoveryStatus::kNone ? "none" : s == RecoveryStatus::kCollecting ? "collecting" : "timelocked";
}

json dump_json(const Ledger& ledger) {
  const LedgerState st = ledger.snapshot();
  json docs = json::array();
  for (const auto& [did, doc] : st.documents) {
    json g = json::array();
    for (const Did& d : doc.guardians) g.push_back(d.render());
    json entry = {{"did", did.render()},
                  {"active_key_root", hex_of(doc.active_key_root)},
                  {"guardians", g},
                  {"threshold", doc.threshold},
                  {"updated_at", doc.updated_at}};
    if (auto it = st.recovery.find(did); it != st.recovery.end()) {
      json approvals = json::array();
      for (const Did& d : it->second.approvals) approvals.push_back(d.render());
      entry["recovery"] = {{"status", status_name(it->second.status)},
                           {"proposed_key_root", hex_of(it->second.proposed_key_root)},
                           {"approvals", approvals},
                           {"started_at", it->second.started_at},
                           {"locked_at", it->second.locked_at}};
    }
    docs.push_back(entry);
  }
  json roots = json::object();
  for (const auto& [did, records] : st.roots) {
    json list = json::array();
    for (const RootRecord& r : records) {
      list.push_back({{"epoch", r.epoch}, {"root", std::to_string(r.root.value())}, {"height", r.height}});
    }
    roots[did.render()] = list;
  }
  return {{"format", "zkdid-ledger-dump/1"},
          {"height", ledger.height()},
          {"pending", ledger.pending()},
          {"timelock_blocks", ledger.config().timelock_blocks},
          {"state_digest", hex_of(state_digest(st))},
          {"documents", docs},
          {"roots", roots}};
}

std::string dump_text(const Ledger& ledger) {
  const LedgerState st = ledger.snapshot();
  std::string out = "height " + std::to_string(ledger.height()) + " pending " + std::to_string(ledger.pending()) +
                    " digest " + hex_of(state_digest(st)) + "\n";
  for (const auto& [did, doc] : st.documents) {
    out += did.render() + " key " + hex_of(doc.active_key_root).substr(0, 16) + " guardians " +
           std::to_string(doc.guardians.size()) + " threshold " + std::to_string(doc.threshold);
    if (auto it = st.recovery.find(did); it != st.recovery.end()) {
      out += " recovery " + status_name(it->second.status);
    }
    if (auto it = st.roots.find(did); it != st.roots.end()) {
      out += " epoch " + std::to_string(it->second.back().epoch);
    }
    out += "\n";
  }
  return out;
}

int fail(std::ostream& err, ErrorCode code, const std::string& message) {
  err << "error: " << error_code_name(code) << ": " << message << "\n";
  return code == ErrorCode::kParseError || code == ErrorCode::kDecodeError ? kExitUsage : kExitFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Zero-knowledge decentralized identity toolkit", "zkdid"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--seed", o.seed, "Seed for every random choice")->envname("ZKDID_SEED");

  auto* keygen = app.add_subcommand("keygen", "Generate a hash-based key tree");
  keygen->add_option("--name", o.name, "Label mixed into the seed")->required();
  keygen->add_option("--out", o.out, "Key file to write")->required();
  keygen->add_option("--height", o.height, "Key tree height (2^height one-time keys)")->check(CLI::Range(1, 20));
  keygen->add_option("--for", o.for_did, "Existing DID this key is meant to take over");

  auto* did = app.add_subcommand("did", "DID management");
  did->require_subcommand(1);
  auto* did_register = did->add_subcommand("register", "Register the key file's DID");
  did_register->add_option("--ledger", o.ledger)->required();
  did_register->add_option("--key", o.key)->required();
  did_register->add_option("--guardians", o.guardians, "Guardian DIDs")->delimiter(',');
  did_register->add_option("--threshold", o.threshold)->check(CLI::Range(0, 255));
  auto* did_guardians = did->add_subcommand("guardians", "Replace the guardian set");
  did_guardians->add_option("--ledger", o.ledger)->required();
  did_guardians->add_option("--key", o.key)->required();
  did_guardians->add_option("--guardians", o.guardians)->delimiter(',');
  did_guardians->add_option("--threshold", o.threshold)->check(CLI::Range(0, 255));

  auto* issuer = app.add_subcommand("issuer", "Issuer setup");
  issuer->require_subcommand(1);
  auto* issuer_init = issuer->add_subcommand("init", "Register an issuer and publish its empty accumulator");
  issuer_init->add_option("--ledger", o.ledger)->required();
  issuer_init->add_option("--key", o.key)->required();
  issuer_init->add_option("--schema", o.schema)->required();
  issuer_init->add_option("--params", o.params)->check(CLI::IsMember({"toy", "default"}));
  issuer_init->add_option("--state", o.state, "Issuer state file to write")->required();

  auto* issue = app.add_subcommand("issue", "Issue a credential");
  issue->add_option("--ledger", o.ledger)->required();
  issue->add_option("--key", o.key)->required();
  issue->add_option("--state", o.state)->required();
  issue->add_option("--subject", o.subject)->required();
  issue->add_option("--attr", o.attrs, "NAME=VALUE, in schema order")->required();
  issue->add_option("--out", o.out)->required();

  auto* revoke = app.add_subcommand("revoke", "Revoke a credential slot");
  revoke->add_option("--ledger", o.ledger)->required();
  revoke->add_option("--key", o.key)->required();
  revoke->add_option("--state", o.state)->required();
  revoke->add_option("--slot", o.slot)->required();

  auto* request = app.add_subcommand("request", "Write a presentation request");
  request->add_option("--issuer", o.issuer)->required();
  request->add_option("--schema", o.schema)->required();
  request->add_option("--attr", o.attribute)->required();
  request->add_option("--gte", o.gte)->required();
  request->add_option("--within", o.within, "Accept roots up to K epochs old");
  request->add_option("--name", o.name, "Label mixed into the nonce");
  request->add_option("--out", o.out)->required();

  auto* present = app.add_subcommand("present", "Answer a request with a proof");
  present->add_option("--ledger", o.ledger)->required();
  present->add_option("--key", o.key)->required();
  present->add_option("--credential", o.credential)->required();
  present->add_option("--request", o.request)->required();
  present->add_option("--issuer-state", o.issuer_state, "Refresh the witness from this issuer state");
  present->add_option("--params", o.params)->check(CLI::IsMember({"toy", "default"}));
  present->add_option("--out", o.out)->required();

  auto* verify = app.add_subcommand("verify", "Check a presentation against a request");
  verify->add_option("--ledger", o.ledger)->required();
  verify->add_option("--request", o.request)->required();
  verify->add_option("--presentation", o.presentation)->required();
  verify->add_option("--nonce", o.nonce, "Expected nonce (hex), overriding the request's");
  verify->add_option("--params", o.params)->check(CLI::IsMember({"toy", "default"}));

  auto* recovery = app.add_subcommand("recovery", "Social key recovery");
  recovery->require_subcommand(1);
  std::map<std::string, CLI::App*> verbs;
  for (const char* verb : {"initiate", "approve", "cancel", "finalize"}) {
    auto* sub = recovery->add_subcommand(verb);
    sub->add_option("--ledger", o.ledger)->required();
    sub->add_option("--key", o.key, "Signer's key file")->required();
    if (std::string(verb) != "cancel") sub->add_option("--target", o.target, "DID being recovered")->required();
    if (std::string(verb) == "initiate") sub->add_option("--new-key", o.new_key)->required();
    if (std::string(verb) == "approve") sub->add_option("--new-key", o.new_key);
    verbs[verb] = sub;
  }

  auto* ledger_cmd = app.add_subcommand("ledger", "Ledger inspection");
  ledger_cmd->require_subcommand(1);
  auto* dump = ledger_cmd->add_subcommand("dump", "Print the current state");
  dump->add_option("--ledger", o.ledger)->required();
  dump->add_flag("--json", o.as_json);
  auto* tick = ledger_cmd->add_subcommand("tick", "Seal pending transactions into blocks");
  tick->add_option("--ledger", o.ledger)->required();
  tick->add_option("--blocks", o.blocks)->check(CLI::Range(uint64_t{1}, uint64_t{1000000}));

  auto* scenario = app.add_subcommand("scenario", "Run a scenario script");
  scenario->add_option("file", o.file)->required();
  scenario->add_option("--report", o.report, "Also write the report here");

  auto* bench = app.add_subcommand("bench", "Prove and verify timings");
  bench->add_option("--reps", o.reps)->check(CLI::Range(size_t{1}, size_t{10000}));
  bench->add_option("--params", o.bench_params)->check(CLI::IsMember({"toy", "default", "both"}));
  bench->add_flag("--json", o.as_json);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: Usage: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (keygen->parsed()) {
      KeyFile kf;
      kf.name = o.name;
      kf.seed = derive_seed(o.seed, "key/" + o.name);
      kf.height = o.height;
      const KeyTree tree = kf.tree();
      kf.did = o.for_did.empty() ? Did::from_key_root(tree.root()) : Did::parse(o.for_did);
      kf.save(o.out);
      out << kf.did.render() << " " << hex_of(tree.root()) << "\n";
      return kExitOk;
    }
    if (did_register->parsed() || did_guardians->parsed()) {
      auto ledger = open_ledger(o.ledger, did_register->parsed());
      KeyFile kf = KeyFile::load(o.key);
      KeyTree tree = kf.tree();
      std::vector<Did> guardians;
      for (const auto& g : o.guardians) guardians.push_back(Did::parse(g));
      const auto t = static_cast<uint8_t>(o.threshold);
      TxPayload payload = did_register->parsed() ? TxPayload(RegisterDid{tree.root(), guardians, t})
                                                 : TxPayload(ConfigureGuardians{kf.did, guardians, t});
      const Receipt r = ledger->submit(make_tx(std::move(payload), kf.did, tree));
      kf.next_index = tree.next_index();
      kf.save(o.key);
      ledger->save(o.ledger);
      out << kf.did.render() << " height " << r.height << " cost " << r.cost_units << "\n";
      return kExitOk;
    }
    if (issuer_init->parsed()) {
      auto ledger = open_ledger(o.ledger, true);
      KeyFile kf = KeyFile::load(o.key);
      if (kf.did != Did::from_key_root(kf.tree().root())) {
        throw Error(ErrorCode::kInvalidParams, "issuer init needs a fresh key, not a recovery key");
      }
      Issuer is(*ledger, kf.seed, o.schema, params_by_name(o.params),
                derive_rng(o.seed, "issuer/" + kf.did.render() + "/0"), kf.height);
      IssuerFile f{is.did(), o.schema, o.params, ""};
      save_issuer(is, f, kf, o);
      ledger->save(o.ledger);
      out << is.did().render() << "\n";
      return kExitOk;
    }
    if (issue->parsed() || revoke->parsed()) {
      auto ledger = open_ledger(o.ledger, false);
      KeyFile kf = KeyFile::load(o.key);
      IssuerFile f = IssuerFile::load(o.state);
      auto is = restore_issuer(*ledger, o, kf, f);
      if (revoke->parsed()) {
        is->revoke(o.slot);
        out << "revoked slot " << o.slot << " epoch " << is->accumulator().epoch() << "\n";
      } else {
        std::vector<Attribute> attrs;
        for (const auto& a : o.attrs) {
          const size_t eq = a.find('=');
          if (eq == std::string::npos || eq == 0) throw Error(ErrorCode::kParseError, "--attr expects NAME=VALUE");
          const uint64_t v = parse_number(a.substr(eq + 1), a.substr(0, eq));
          if (v > UINT32_MAX) throw Error(ErrorCode::kAttributeOutOfRange, a.substr(0, eq) + " does not fit in 32 bits");
          attrs.push_back({a.substr(0, eq), static_cast<uint32_t>(v)});
        }
        IssuedCredential ic = is->issue(Did::parse(o.subject), attrs);
        write_file(o.out, credential_file(ic).dump(2) + "\n");
        out << "slot " << ic.credential.slot << " epoch " << is->accumulator().epoch() << "\n";
      }
      save_issuer(*is, f, kf, o);
      ledger->save(o.ledger);
      return kExitOk;
    }
    if (request->parsed()) {
      if (o.gte > UINT32_MAX) throw Error(ErrorCode::kAttributeOutOfRange, "threshold does not fit in 32 bits");
      PresentationRequest req;
      req.issuer = Did::parse(o.issuer);
      req.schema = o.schema;
      req.attribute = o.attribute;
      req.threshold = static_cast<uint32_t>(o.gte);
      if (o.within) req.policy = EpochPolicy::within(*o.within);
      Rng rng = derive_rng(o.seed, "request/" + o.name);
      rng.fill(req.nonce);
      write_file(o.out, request_to_json(req) + "\n");
      out << to_hex(req.nonce) << "\n";
      return kExitOk;
    }
    if (present->parsed()) {
      auto ledger = open_ledger(o.ledger, false);
      KeyFile kf = KeyFile::load(o.key);
      const PresentationRequest req = request_from_json(read_file(o.request));
      const IssuedCredential ic = load_credential_file(o.credential);
      HolderWallet wallet(*ledger, kf.did, kf.tree(), params_by_name(o.params),
                          derive_rng(o.seed, "present/" + kf.did.render() + "/" + to_hex(req.nonce)));
      WitnessRefresher refresher;
      if (!o.issuer_state.empty()) {
        auto acc = std::make_shared<Accumulator>(Accumulator::deserialize(IssuerFile::load(o.issuer_state).accumulator));
        refresher = [acc](const MembershipWitness& w) { return acc->refresh(w); };
      }
      wallet.store(ic.credential, ic.witness, refresher);
      const Presentation pres = wallet.present(req);
      write_file(o.out, presentation_to_json(pres) + "\n");
      out << "epoch " << pres.statement.epoch << " bytes " << presentation_bytes(pres).size() << "\n";
      return kExitOk;
    }
    if (verify->parsed()) {
      auto ledger = open_ledger(o.ledger, false);
      PresentationRequest req = request_from_json(read_file(o.request));
      const Presentation pres = presentation_from_json(read_file(o.presentation));
      if (!o.nonce.empty()) {
        const Bytes n = from_hex(o.nonce);
        if (n.size() != req.nonce.size()) throw Error(ErrorCode::kParseError, "--nonce must be 16 bytes of hex");
        std::copy(n.begin(), n.end(), req.nonce.begin());
      }
      const Decision d = verify_presentation(*ledger, req, pres, params_by_name(o.params));
      if (d.accepted()) {
        out << "Accept\n";
        return kExitOk;
      }
      out << "Reject(" << reject_reason_name(d.reason) << ")\n";
      err << "reject: " << reject_reason_name(d.reason) << ": " << d.detail << "\n";
      return kExitFailure;
    }
    if (recovery->parsed()) {
      auto ledger = open_ledger(o.ledger, false);
      KeyFile kf = KeyFile::load(o.key);
      Actor signer(*ledger, kf.did, kf.tree());
      const Did target = o.target.empty() ? kf.did : Did::parse(o.target);
      std::optional<Digest32> proposed;
      if (!o.new_key.empty()) proposed = KeyFile::load(o.new_key).tree().root();
      if (verbs["initiate"]->parsed()) {
        signer.submit(InitiateRecovery{target, *proposed});
      } else if (verbs["approve"]->parsed()) {
        signer.submit(ApproveRecovery{target, proposed.value_or(ledger->recovery_state(target).proposed_key_root)});
      } else if (verbs["cancel"]->parsed()) {
        signer.submit(CancelRecovery{target});
      } else {
        signer.submit(FinalizeRecovery{target});
      }
      kf.next_index = signer.keys().next_index();
      kf.save(o.key);
      ledger->save(o.ledger);
      out << target.render() << " recovery " << status_name(ledger->recovery_state(target).status) << "\n";
      return kExitOk;
    }
    if (dump->parsed()) {
      auto ledger = open_ledger(o.ledger, false);
      out << (o.as_json ? dump_json(*ledger).dump(2) + "\n" : dump_text(*ledger));
      return kExitOk;
    }
    if (tick->parsed()) {
      auto ledger = open_ledger(o.ledger, false);
      for (uint64_t i = 0; i < o.blocks; ++i) ledger->tick();
      ledger->save(o.ledger);
      out << "height " << ledger->height() << "\n";
      return kExitOk;
    }
    if (scenario->parsed()) {
      Script script;
      try {
        script = load_script(o.file);
      } catch (const ScriptError& e) {
        err << "error: ParseError: " << o.file << ": " << e.what() << "\n";
        return kExitUsage;
      }
      const ScenarioReport report = run_scenario(script, o.seed);
      const std::string text = report.text();
      out << text;
      if (!o.report.empty()) write_file(o.report, text);
      if (!report.passed()) err << "error: AssertionFailed: " << report.failures << " failing steps\n";
      return report.passed() ? kExitOk : kExitFailure;
    }
    if (bench->parsed()) {
      std::vector<BenchResult> results;
      for (const char* p : {"toy", "default"}) {
        if (o.bench_params == "both" || o.bench_params == p) results.push_back(run_bench(p, o.reps, o.seed));
      }
      out << (o.as_json ? bench_json(results) : bench_table(results));
      return kExitOk;
    }
  } catch (const Error& e) {
    const std::string what = e.what();
    const std::string prefix = std::string(error_code_name(e.code())) + ": ";
    return fail(err, e.code(), what.starts_with(prefix) ? what.substr(prefix.size()) : what);
  }
  return kExitUsage;
}

}  // namespace zkdid::cli
