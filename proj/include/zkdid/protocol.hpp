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
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "zkdid/accumulator.hpp"
#include "zkdid/air.hpp"
#include "zkdid/identity.hpp"
#include "zkdid/rng.hpp"
#include "zkdid/stark.hpp"
#include "zkdid/vdr.hpp"

namespace zkdid {

/// Ordered attribute names of a credential type. The statement carries the
/// position and count, so verifier and holder must agree on the layout.
struct Schema {
  std::string name;
  std::vector<std::string> attributes;

  std::optional<size_t> index_of(std::string_view attribute) const;
};

/// "credit/v1": creditScore. "kyc/v1": age, country, creditScore.
/// Throws UnknownSchema.
const Schema& builtin_schema(std::string_view name);
std::vector<std::string> builtin_schema_names();

struct EpochPolicy {
  enum class Kind : uint8_t { kCurrentOnly, kWithinK };
  Kind kind = Kind::kCurrentOnly;
  /// Maximum age in epochs for kWithinK.
  uint64_t k = 0;

  static EpochPolicy current_only() { return {}; }
  static EpochPolicy within(uint64_t k) { return {Kind::kWithinK, k}; }
  bool operator==(const EpochPolicy&) const = default;
};

/// Verifier's challenge: prove attribute >= threshold for a credential of
/// `schema` from `issuer`, bound to `nonce`.
struct PresentationRequest {
  Did issuer;
  std::string schema;
  std::string attribute;
  uint32_t threshold = 0;
  Nonce nonce{};
  EpochPolicy policy;

  bool operator==(const PresentationRequest&) const = default;
};

/// Public statement plus proof. Holds nothing about the holder or the
/// credential beyond what the statement states.
struct Presentation {
  PredicateStatement statement;
  StarkProof proof;

  bool operator==(const Presentation&) const = default;
};

/// canonical_encode(statement) || encode_proof(proof).
Bytes presentation_bytes(const Presentation& p);

enum class RejectReason : uint8_t {
  kNone,
  kIssuerMismatch,
  kUnknownSchema,
  kAttributeMismatch,
  kThresholdMismatch,
  kNonceMismatch,
  kParamsMismatch,
  kUnknownIssuer,
  kStaleRoot,
  kRootMismatch,
  kInvalidProof,
  kReplayedNonce,
};

std::string_view reject_reason_name(RejectReason r);
/// Throws ParseError for an unknown name.
RejectReason parse_reject_reason(std::string_view name);

struct Decision {
  RejectReason reason = RejectReason::kNone;
  std::string detail;

  bool accepted() const { return reason == RejectReason::kNone; }
  static Decision accept() { return {}; }
  static Decision reject(RejectReason r, std::string detail) { return {r, std::move(detail)}; }
};

/// A ledger participant: owns a key tree and signs its own transactions.
/// Single writer; the key tree index is not shared.
class Actor {
 public:
  /// Registers the DID on the ledger.
  Actor(Ledger& ledger, const Seed32& seed, unsigned key_height = KeyTree::kDefaultHeight);
  /// Reattaches to an already registered DID. The key tree must be the
  /// document's active one.
  Actor(Ledger& ledger, const Did& did, KeyTree keys);
  virtual ~Actor() = default;

  const Did& did() const { return did_; }
  const KeyTree& keys() const { return keys_; }
  Ledger& ledger() const { return *ledger_; }

  Tx sign(TxPayload payload, uint64_t not_before = 0, uint64_t not_after = UINT64_MAX);
  /// sign() then submit.
  Receipt submit(TxPayload payload);
  /// Switches to a key tree that the ledger now lists as active (after a
  /// rotation or a finalized recovery).
  void adopt_keys(KeyTree keys);

 protected:
  Ledger* ledger_;
  KeyTree keys_;
  Did did_;
};

struct IssuedCredential {
  Credential credential;
  MembershipWitness witness;
};

/// Issuer: signs credentials for one schema and keeps the accumulator whose
/// root it publishes after every mutation.
class Issuer : public Actor {
 public:
  /// Registers the DID and publishes the epoch-0 root. Throws UnknownSchema,
  /// InvalidParams when the schema does not fit `params`.
  Issuer(Ledger& ledger, const Seed32& seed, std::string schema, ProofParams params = ProofParams::standard(),
         Rng rng = Rng(0), unsigned key_height = KeyTree::kDefaultHeight);
  /// Restores a saved issuer. The accumulator must match the published roots.
  Issuer(Ledger& ledger, const Did& did, KeyTree keys, std::string schema, ProofParams params, Accumulator acc,
         Rng rng);

  const std::string& schema() const { return schema_; }
  const ProofParams& params() const { return params_; }
  const Accumulator& accumulator() const { return acc_; }
  const Rng& rng() const { return rng_; }

  /// Attribute names must match the schema in order. Throws InvalidCredential,
  /// AttributeOutOfRange, CapacityExhausted, KeysExhausted.
  IssuedCredential issue(const Did& subject, const std::vector<Attribute>& attributes);
  /// Throws SlotNotOccupied.
  void revoke(uint32_t slot);
  /// Current witness for a slot. Throws SlotNotOccupied.
  MembershipWitness refresh(const MembershipWitness& stale) const { return acc_.refresh(stale); }

 private:
  void publish();

  std::string schema_;
  ProofParams params_;
  Accumulator acc_;
  Rng rng_;
};

/// Source of fresh membership witnesses, normally Issuer::refresh.
using WitnessRefresher = std::function<MembershipWitness(const MembershipWitness&)>;

struct StoredCredential {
  Credential credential;
  MembershipWitness witness;
  WitnessRefresher refresher;
};

/// Holder: stores credentials and answers presentation requests.
class HolderWallet : public Actor {
 public:
  HolderWallet(Ledger& ledger, const Seed32& seed, ProofParams params = ProofParams::standard(), Rng rng = Rng(0),
               unsigned key_height = KeyTree::kDefaultHeight);
  HolderWallet(Ledger& ledger, const Did& did, KeyTree keys, ProofParams params, Rng rng);

  const ProofParams& params() const { return params_; }
  const std::vector<StoredCredential>& credentials() const { return creds_; }

  /// Checks subject, issuer signature and membership before storing.
  /// Throws InvalidCredential. Returns the credential's position.
  size_t store(const Credential& c, const MembershipWitness& w, WitnessRefresher refresher = {});

  /// First stored credential matching the request's issuer, schema and attribute.
  std::optional<size_t> find(const PresentationRequest& req) const;

  /// Refreshes the witness, builds the statement against the published root
  /// and proves. Throws NoMatchingCredential, PredicateUnsatisfied, Revoked,
  /// StaleRootPolicy.
  Presentation present(const PresentationRequest& req);
  Presentation present(size_t credential, const PresentationRequest& req);

 private:
  ProofParams params_;
  Rng rng_;
  std::vector<StoredCredential> creds_;
};

/// Stateless verification: request consistency, root freshness, then the
/// proof. Never throws.
Decision verify_presentation(const Ledger& ledger, const PresentationRequest& req, const Presentation& pres,
                             const ProofParams& expected = ProofParams::standard());

/// Reference verifier: issues nonces and refuses to accept one twice.
class Verifier {
 public:
  explicit Verifier(const Ledger& ledger, ProofParams params = ProofParams::standard(), Rng rng = Rng(0));

  PresentationRequest request(const Did& issuer, std::string schema, std::string attribute, uint32_t threshold,
                              EpochPolicy policy = EpochPolicy::current_only());
  /// verify_presentation, then the seen-nonce check. Accepted nonces are recorded.
  Decision verify(const PresentationRequest& req, const Presentation& pres);

  const ProofParams& params() const { return params_; }

 private:
  const Ledger* ledger_;
  ProofParams params_;
  Rng rng_;
  std::set<Nonce> seen_;
};

// JSON envelopes, format "zkdid-pres/1". Parsers throw ParseError.

std::string presentation_to_json(const Presentation& p);
Presentation presentation_from_json(std::string_view text);
std::string request_to_json(const PresentationRequest& r);
PresentationRequest request_from_json(std::string_view text);
/// Readable fields plus the canonical encoding; the parser requires both to agree.
std::string credential_to_json(const Credential& c);
Credential credential_from_json(std::string_view text);
std::string witness_to_json(const MembershipWitness& w);
MembershipWitness witness_from_json(std::string_view text);

}  // namespace zkdid
