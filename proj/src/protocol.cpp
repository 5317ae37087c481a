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

#include "zkdid/protocol.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <map>

#include <json.hpp>

#include "zkdid/error.hpp"

namespace zkdid {

using nlohmann::json;

namespace {

constexpr std::string_view kPresFormat = "zkdid-pres/1";
constexpr std::string_view kCredFormat = "zkdid-cred/1";
constexpr std::string_view kWitnessFormat = "zkdid-wit/1";

const std::map<std::string, Schema, std::less<>>& schemas() {
  static const std::map<std::string, Schema, std::less<>> s = {
      {"credit/v1", {"credit/v1", {"creditScore"}}},
      {"kyc/v1", {"kyc/v1", {"age", "country", "creditScore"}}},
  };
  return s;
}

constexpr std::array<std::string_view, 12> kReasonNames = {
    "None",         "IssuerMismatch", "UnknownSchema", "AttributeMismatch", "ThresholdMismatch", "NonceMismatch",
    "ParamsMismatch", "UnknownIssuer", "StaleRoot",    "RootMismatch",      "InvalidProof",      "ReplayedNonce"};

PredicateStatement probe_statement(const Schema& schema) {
  PredicateStatement s;
  s.attribute_count = static_cast<uint8_t>(schema.attributes.size());
  return s;
}

bool fits(const EpochPolicy& policy, uint64_t epoch, uint64_t current) {
  if (epoch > current) return false;
  return policy.kind == EpochPolicy::Kind::kCurrentOnly ? epoch == current : current - epoch <= policy.k;
}

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorCode::kParseError, what); }

json parse_envelope(std::string_view text, std::string_view format) {
  json j = json::parse(text.begin(), text.end(), nullptr, false);
  if (j.is_discarded() || !j.is_object()) parse_fail("not a JSON object");
  if (j.value("format", "") != format) parse_fail("expected format " + std::string(format));
  return j;
}

template <class T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) parse_fail(std::string("missing field ") + key);
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    parse_fail(std::string("bad field ") + key);
  }
}

template <class T>
T bounded(const json& j, const char* key, uint64_t max) {
  const json& v = j.contains(key) ? j.at(key) : json();
  if (!v.is_number_unsigned() || v.get<uint64_t>() > max) parse_fail(std::string("bad integer field ") + key);
  return static_cast<T>(v.get<uint64_t>());
}

Bytes hex_field(const json& j, const char* key, std::optional<size_t> size = std::nullopt) {
  const auto s = field<std::string>(j, key);
  Bytes b;
  try {
    b = from_hex(s);
  } catch (const Error&) {
    parse_fail(std::string("bad hex in ") + key);
  }
  if (size && b.size() != *size) parse_fail(std::string("wrong length for ") + key);
  return b;
}

Felt felt_field(const json& j, const char* key) {
  const auto s = field<std::string>(j, key);
  if (s.empty() || s.size() > 20 || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    parse_fail(std::string("bad field element ") + key);
  }
  uint64_t v = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size() || v >= Felt::kModulus || (s.size() > 1 && s[0] == '0')) {
    parse_fail(std::string("non-canonical field element ") + key);
  }
  return Felt::from_canonical(v);
}

Did did_field(const json& j, const char* key) {
  try {
    return Did::parse(field<std::string>(j, key));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kParseError) throw;
    parse_fail(std::string("bad DID in ") + key);
  }
}

template <size_t N>
std::array<uint8_t, N> fixed_hex(const json& j, const char* key) {
  const Bytes b = hex_field(j, key, N);
  std::array<uint8_t, N> out{};
  std::copy(b.begin(), b.end(), out.begin());
  return out;
}

}  // namespace

std::optional<size_t> Schema::index_of(std::string_view attribute) const {
  auto it = std::find(attributes.begin(), attributes.end(), attribute);
  if (it == attributes.end()) return std::nullopt;
  return static_cast<size_t>(it - attributes.begin());
}

const Schema& builtin_schema(std::string_view name) {
  auto it = schemas().find(name);
  if (it == schemas().end()) throw Error(ErrorCode::kUnknownSchema, "unknown schema " + std::string(name));
  return it->second;
}

std::vector<std::string> builtin_schema_names() {
  std::vector<std::string> out;
  for (const auto& [name, s] : schemas()) out.push_back(name);
  return out;
}

Bytes presentation_bytes(const Presentation& p) {
  Bytes out = canonical_encode(p.statement);
  const Bytes proof = encode_proof(p.proof);
  out.insert(out.end(), proof.begin(), proof.end());
  return out;
}

std::string_view reject_reason_name(RejectReason r) { return kReasonNames[static_cast<size_t>(r)]; }

RejectReason parse_reject_reason(std::string_view name) {
  for (size_t i = 0; i < kReasonNames.size(); ++i) {
    if (kReasonNames[i] == name) return static_cast<RejectReason>(i);
  }
  throw Error(ErrorCode::kParseError, "unknown reject reason " + std::string(name));
}

// ---------------------------------------------------------------------------

Actor::Actor(Ledger& ledger, const Seed32& seed, unsigned key_height)
    : ledger_(&ledger), keys_(seed, key_height), did_(Did::from_key_root(keys_.root())) {
  submit(RegisterDid{keys_.root(), {}, 0});
}

Actor::Actor(Ledger& ledger, const Did& did, KeyTree keys) : ledger_(&ledger), keys_(std::move(keys)), did_(did) {
  if (ledger.resolve_did(did).active_key_root != keys_.root()) {
    throw Error(ErrorCode::kInvalidParams, "key tree is not the active key of " + did.render());
  }
}

Tx Actor::sign(TxPayload payload, uint64_t not_before, uint64_t not_after) {
  return make_tx(std::move(payload), did_, keys_, not_before, not_after);
}

Receipt Actor::submit(TxPayload payload) { return ledger_->submit(sign(std::move(payload))); }

void Actor::adopt_keys(KeyTree keys) {
  if (ledger_->resolve_did(did_).active_key_root != keys.root()) {
    throw Error(ErrorCode::kInvalidParams, "key tree is not the active key of " + did_.render());
  }
  keys_ = std::move(keys);
}

// ---------------------------------------------------------------------------

Issuer::Issuer(Ledger& ledger, const Seed32& seed, std::string schema, ProofParams params, Rng rng,
               unsigned key_height)
    : Actor(ledger, seed, key_height),
      schema_(std::move(schema)),
      params_(params),
      acc_(Accumulator::for_config(params.air)),
      rng_(rng) {
  params_.validate();
  try {
    PredicateLayout::make(params_.air, probe_statement(builtin_schema(schema_)));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kUnknownSchema) throw;
    throw Error(ErrorCode::kInvalidParams, "schema " + schema_ + " does not fit the proof parameters");
  }
  publish();
}

Issuer::Issuer(Ledger& ledger, const Did& did, KeyTree keys, std::string schema, ProofParams params,
               Accumulator acc, Rng rng)
    : Actor(ledger, did, std::move(keys)), schema_(std::move(schema)), params_(params), acc_(std::move(acc)),
      rng_(rng) {
  builtin_schema(schema_);
  const RootRecord cur = ledger.current_root(did);
  if (cur.epoch != acc_.epoch() || cur.root != acc_.root()) {
    throw Error(ErrorCode::kInvalidParams, "accumulator does not match the published root");
  }
}

void Issuer::publish() { submit(PublishRoot{acc_.epoch(), acc_.root()}); }

IssuedCredential Issuer::issue(const Did& subject, const std::vector<Attribute>& attributes) {
  const Schema& schema = builtin_schema(schema_);
  if (attributes.size() != schema.attributes.size()) {
    throw Error(ErrorCode::kInvalidCredential, "schema " + schema_ + " has " +
                                                   std::to_string(schema.attributes.size()) + " attributes");
  }
  for (size_t i = 0; i < attributes.size(); ++i) {
    if (attributes[i].name != schema.attributes[i]) {
      throw Error(ErrorCode::kInvalidCredential, "attribute " + std::to_string(i) + " must be " + schema.attributes[i]);
    }
    if (attributes[i].value >= params_.air.value_bound()) {
      throw Error(ErrorCode::kAttributeOutOfRange,
                  attributes[i].name + " must be below " + std::to_string(params_.air.value_bound()));
    }
  }
  if (keys_.capacity() - keys_.next_index() < 2) {
    throw Error(ErrorCode::kKeysExhausted, "issuing needs two one-time keys");
  }

  IssuedCredential out;
  Credential& c = out.credential;
  c.id = rng_.next_array<16>();
  c.issuer = did_;
  c.subject = subject;
  c.schema = schema_;
  c.attributes = attributes;
  c.salt = rng_.next_felt();
  c.slot = acc_.add(c.commitment(params_.air.mimc()));
  c.issued_epoch = acc_.epoch();
  publish();
  c.signature = keys_.sign(canonical_encode_body(c));
  out.witness = acc_.witness(c.slot);
  return out;
}

void Issuer::revoke(uint32_t slot) {
  if (!acc_.is_occupied(slot)) {
    throw Error(ErrorCode::kSlotNotOccupied, "slot " + std::to_string(slot) + " is not occupied");
  }
  if (keys_.next_index() >= keys_.capacity()) throw Error(ErrorCode::kKeysExhausted, "no one-time key left");
  acc_.revoke(slot);
  publish();
}

// ---------------------------------------------------------------------------

HolderWallet::HolderWallet(Ledger& ledger, const Seed32& seed, ProofParams params, Rng rng, unsigned key_height)
    : Actor(ledger, seed, key_height), params_(params), rng_(rng) {}

HolderWallet::HolderWallet(Ledger& ledger, const Did& did, KeyTree keys, ProofParams params, Rng rng)
    : Actor(ledger, did, std::move(keys)), params_(params), rng_(rng) {}

size_t HolderWallet::store(const Credential& c, const MembershipWitness& w, WitnessRefresher refresher) {
  auto invalid = [](const std::string& why) { return Error(ErrorCode::kInvalidCredential, why); };
  if (c.subject != did_) throw invalid("credential subject is not this wallet");
  DidDocument issuer;
  try {
    issuer = ledger_->resolve_did(c.issuer);
  } catch (const Error&) {
    throw invalid("issuer is not registered");
  }
  if (!verify_sig(issuer.active_key_root, canonical_encode_body(c), c.signature)) {
    throw invalid("issuer signature does not verify");
  }
  if (w.slot != c.slot || w.path.index != c.slot || w.path.depth() != params_.air.tree_depth) {
    throw invalid("witness does not belong to this credential");
  }
  Felt published;
  try {
    published = ledger_->root_at_epoch(c.issuer, w.epoch).root;
  } catch (const Error&) {
    throw invalid("witness epoch was never published");
  }
  const MimcParams mimc = params_.air.mimc();
  if (alg_path_root(c.commitment(mimc), w.path, mimc) != published) {
    throw invalid("credential is not in the published accumulator");
  }
  creds_.push_back({c, w, std::move(refresher)});
  return creds_.size() - 1;
}

std::optional<size_t> HolderWallet::find(const PresentationRequest& req) const {
  for (size_t i = 0; i < creds_.size(); ++i) {
    const Credential& c = creds_[i].credential;
    if (c.issuer == req.issuer && c.schema == req.schema && c.attribute_index(req.attribute)) return i;
  }
  return std::nullopt;
}

Presentation HolderWallet::present(const PresentationRequest& req) {
  auto i = find(req);
  if (!i) throw Error(ErrorCode::kNoMatchingCredential, "no credential for " + req.schema + " from that issuer");
  return present(*i, req);
}

Presentation HolderWallet::present(size_t index, const PresentationRequest& req) {
  if (index >= creds_.size()) throw Error(ErrorCode::kNoMatchingCredential, "no such stored credential");
  StoredCredential& stored = creds_[index];
  const Credential& c = stored.credential;
  const Schema& schema = builtin_schema(req.schema);
  const auto attr = c.attribute_index(req.attribute);
  if (c.issuer != req.issuer || c.schema != req.schema || !attr || schema.index_of(req.attribute) != attr ||
      c.attributes.size() != schema.attributes.size()) {
    throw Error(ErrorCode::kNoMatchingCredential, "stored credential does not match the request");
  }
  if (c.attributes[*attr].value < req.threshold) {
    throw Error(ErrorCode::kPredicateUnsatisfied, req.attribute + " is below the requested threshold");
  }

  if (stored.refresher) {
    try {
      stored.witness = stored.refresher(stored.witness);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kSlotNotOccupied) throw;
      throw Error(ErrorCode::kRevoked, "the issuer has revoked this credential");
    }
  }
  const MembershipWitness& w = stored.witness;
  const RootRecord current = ledger_->current_root(c.issuer);
  const RootRecord at = ledger_->root_at_epoch(c.issuer, w.epoch);
  const MimcParams mimc = params_.air.mimc();
  if (alg_path_root(c.commitment(mimc), w.path, mimc) != at.root) {
    throw Error(ErrorCode::kRevoked, "witness no longer matches the published root");
  }
  if (!fits(req.policy, w.epoch, current.epoch)) {
    throw Error(ErrorCode::kStaleRootPolicy, "witness epoch " + std::to_string(w.epoch) +
                                                 " is not accepted at current epoch " + std::to_string(current.epoch));
  }

  Presentation p;
  PredicateStatement& s = p.statement;
  s.accumulator_root = at.root;
  s.epoch = w.epoch;
  s.attribute_index = static_cast<uint8_t>(*attr);
  s.attribute_count = static_cast<uint8_t>(c.attributes.size());
  s.threshold = req.threshold;
  s.nonce = req.nonce;
  s.issuer_did = req.issuer.render();

  PredicateWitness wit;
  wit.attrs = c.values();
  wit.salt = c.salt;
  wit.slot_index = c.slot;
  wit.path = w.path;
  p.proof = prove(s, wit, params_, rng_.next_u64());
  return p;
}

// ---------------------------------------------------------------------------

Decision verify_presentation(const Ledger& ledger, const PresentationRequest& req, const Presentation& pres,
                             const ProofParams& expected) {
  const PredicateStatement& s = pres.statement;
  if (s.issuer_did != req.issuer.render()) return Decision::reject(RejectReason::kIssuerMismatch, s.issuer_did);
  const auto it = schemas().find(req.schema);
  if (it == schemas().end()) return Decision::reject(RejectReason::kUnknownSchema, req.schema);
  const Schema& schema = it->second;
  const auto idx = schema.index_of(req.attribute);
  if (!idx || s.attribute_index != *idx || s.attribute_count != schema.attributes.size()) {
    return Decision::reject(RejectReason::kAttributeMismatch, "statement does not prove " + req.attribute);
  }
  if (s.threshold != req.threshold) {
    return Decision::reject(RejectReason::kThresholdMismatch, "statement threshold " + std::to_string(s.threshold));
  }
  if (s.nonce != req.nonce) return Decision::reject(RejectReason::kNonceMismatch, "statement nonce differs");
  if (pres.proof.params != expected) {
    return Decision::reject(RejectReason::kParamsMismatch, "proof parameters differ from policy");
  }

  RootRecord current;
  try {
    current = ledger.current_root(req.issuer);
  } catch (const Error& e) {
    return Decision::reject(RejectReason::kUnknownIssuer, e.what());
  }
  if (s.epoch > current.epoch) {
    return Decision::reject(RejectReason::kRootMismatch, "epoch " + std::to_string(s.epoch) + " not published");
  }
  if (!fits(req.policy, s.epoch, current.epoch)) {
    return Decision::reject(RejectReason::kStaleRoot, "epoch " + std::to_string(s.epoch) + " superseded by " +
                                                          std::to_string(current.epoch));
  }
  if (ledger.root_at_epoch(req.issuer, s.epoch).root != s.accumulator_root) {
    return Decision::reject(RejectReason::kRootMismatch, "root differs from the one published for the epoch");
  }
  if (!verify(s, req.nonce, pres.proof)) return Decision::reject(RejectReason::kInvalidProof, "proof rejected");
  return Decision::accept();
}

Verifier::Verifier(const Ledger& ledger, ProofParams params, Rng rng)
    : ledger_(&ledger), params_(params), rng_(rng) {}

PresentationRequest Verifier::request(const Did& issuer, std::string schema, std::string attribute,
                                      uint32_t threshold, EpochPolicy policy) {
  PresentationRequest r;
  r.issuer = issuer;
  r.schema = std::move(schema);
  r.attribute = std::move(attribute);
  r.threshold = threshold;
  r.nonce = rng_.next_array<16>();
  r.policy = policy;
  return r;
}

Decision Verifier::verify(const PresentationRequest& req, const Presentation& pres) {
  Decision d = verify_presentation(*ledger_, req, pres, params_);
  if (!d.accepted()) return d;
  if (!seen_.insert(req.nonce).second) return Decision::reject(RejectReason::kReplayedNonce, "nonce already used");
  return d;
}

// ---------------------------------------------------------------------------

std::string presentation_to_json(const Presentation& p) {
  const PredicateStatement& s = p.statement;
  json j;
  j["format"] = kPresFormat;
  j["type"] = "presentation";
  j["statement"] = {{"issuer", s.issuer_did},
                    {"root", std::to_string(s.accumulator_root.value())},
                    {"epoch", s.epoch},
                    {"attribute_index", s.attribute_index},
                    {"attribute_count", s.attribute_count},
                    {"threshold", s.threshold},
                    {"nonce", to_hex(s.nonce)}};
  j["proof"] = to_hex(encode_proof(p.proof));
  return j.dump(2);
}

Presentation presentation_from_json(std::string_view text) {
  const json j = parse_envelope(text, kPresFormat);
  if (j.value("type", "") != "presentation") parse_fail("not a presentation");
  const json st = field<json>(j, "statement");
  Presentation p;
  PredicateStatement& s = p.statement;
  s.issuer_did = field<std::string>(st, "issuer");
  s.accumulator_root = felt_field(st, "root");
  s.epoch = bounded<uint64_t>(st, "epoch", UINT64_MAX);
  s.attribute_index = bounded<uint8_t>(st, "attribute_index", 255);
  s.attribute_count = bounded<uint8_t>(st, "attribute_count", 255);
  s.threshold = bounded<uint32_t>(st, "threshold", UINT32_MAX);
  s.nonce = fixed_hex<16>(st, "nonce");
  try {
    p.proof = decode_proof(hex_field(j, "proof"));
  } catch (const DecodeError& e) {
    parse_fail(std::string("proof: ") + e.what());
  }
  return p;
}

std::string request_to_json(const PresentationRequest& r) {
  json j;
  j["format"] = kPresFormat;
  j["type"] = "request";
  j["issuer"] = r.issuer.render();
  j["schema"] = r.schema;
  j["attribute"] = r.attribute;
  j["predicate"] = {{"gte", r.threshold}};
  j["nonce"] = to_hex(r.nonce);
  if (r.policy.kind == EpochPolicy::Kind::kCurrentOnly) {
    j["policy"] = "current_only";
  } else {
    j["policy"] = {{"within_k", r.policy.k}};
  }
  return j.dump(2);
}

PresentationRequest request_from_json(std::string_view text) {
  const json j = parse_envelope(text, kPresFormat);
  if (j.value("type", "") != "request") parse_fail("not a presentation request");
  PresentationRequest r;
  r.issuer = did_field(j, "issuer");
  r.schema = field<std::string>(j, "schema");
  r.attribute = field<std::string>(j, "attribute");
  r.threshold = bounded<uint32_t>(field<json>(j, "predicate"), "gte", UINT32_MAX);
  r.nonce = fixed_hex<16>(j, "nonce");
  const json pol = field<json>(j, "policy");
  if (pol == "current_only") {
    r.policy = EpochPolicy::current_only();
  } else if (pol.is_object()) {
    r.policy = EpochPolicy::within(bounded<uint64_t>(pol, "within_k", UINT64_MAX));
  } else {
    parse_fail("bad policy");
  }
  return r;
}

std::string credential_to_json(const Credential& c) {
  json attrs = json::array();
  for (const Attribute& a : c.attributes) attrs.push_back({{"name", a.name}, {"value", a.value}});
  json j;
  j["format"] = kCredFormat;
  j["id"] = to_hex(c.id);
  j["issuer"] = c.issuer.render();
  j["subject"] = c.subject.render();
  j["schema"] = c.schema;
  j["attributes"] = attrs;
  j["salt"] = std::to_string(c.salt.value());
  j["slot"] = c.slot;
  j["issued_epoch"] = c.issued_epoch;
  j["canonical"] = to_hex(canonical_encode(c));
  return j.dump(2);
}

Credential credential_from_json(std::string_view text) {
  const json j = parse_envelope(text, kCredFormat);
  Credential c;
  try {
    c = decode_credential(hex_field(j, "canonical"));
  } catch (const DecodeError& e) {
    parse_fail(std::string("canonical: ") + e.what());
  }
  Credential shown = c;
  shown.id = fixed_hex<16>(j, "id");
  shown.issuer = did_field(j, "issuer");
  shown.subject = did_field(j, "subject");
  shown.schema = field<std::string>(j, "schema");
  shown.attributes.clear();
  const json attrs = field<json>(j, "attributes");
  if (!attrs.is_array()) parse_fail("attributes must be an array");
  for (const json& a : attrs) {
    shown.attributes.push_back({field<std::string>(a, "name"), bounded<uint32_t>(a, "value", UINT32_MAX)});
  }
  shown.salt = felt_field(j, "salt");
  shown.slot = bounded<uint32_t>(j, "slot", UINT32_MAX);
  shown.issued_epoch = bounded<uint64_t>(j, "issued_epoch", UINT64_MAX);
  if (shown != c) throw Error(ErrorCode::kInvalidCredential, "readable fields disagree with the canonical encoding");
  return c;
}

std::string witness_to_json(const MembershipWitness& w) {
  json sib = json::array();
  for (Felt f : w.path.siblings) sib.push_back(std::to_string(f.value()));
  json j;
  j["format"] = kWitnessFormat;
  j["slot"] = w.slot;
  j["epoch"] = w.epoch;
  j["siblings"] = sib;
  return j.dump(2);
}

MembershipWitness witness_from_json(std::string_view text) {
  const json j = parse_envelope(text, kWitnessFormat);
  MembershipWitness w;
  w.slot = bounded<uint32_t>(j, "slot", UINT32_MAX);
  w.epoch = bounded<uint64_t>(j, "epoch", UINT64_MAX);
  w.path.index = w.slot;
  const json sib = field<json>(j, "siblings");
  if (!sib.is_array() || sib.size() > 32) parse_fail("siblings must be an array of at most 32 elements");
  for (size_t i = 0; i < sib.size(); ++i) {
    const json holder = {{"s", sib[i]}};
    w.path.siblings.push_back(felt_field(holder, "s"));
  }
  return w;
}

}  // namespace zkdid
