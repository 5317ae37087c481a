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

#include "zkdid/vdr.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <mutex>

#include "zkdid/error.hpp"

namespace zkdid {

namespace {

constexpr uint8_t kTagTx = 0x04;
constexpr std::array<uint8_t, 4> kLogMagic = {'Z', 'K', 'D', 'L'};
constexpr uint16_t kLogVersion = 1;
constexpr uint64_t kOpenBlock = UINT64_MAX;
constexpr size_t kMaxGuardians = 255;

constexpr std::array<std::string_view, 8> kKindNames = {
    "RegisterDid",     "UpdateDocument",  "PublishRoot",    "ConfigureGuardians",
    "InitiateRecovery", "ApproveRecovery", "CancelRecovery", "FinalizeRecovery"};

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

void write_dids(ByteWriter& w, const std::vector<Did>& dids) {
  w.u32(static_cast<uint32_t>(dids.size()));
  for (const Did& d : dids) w.raw(d.id);
}

std::vector<Did> read_dids(ByteReader& r) {
  const size_t at = r.offset();
  const uint32_t n = r.u32();
  if (n > kMaxGuardians) throw DecodeError(at, "too many guardians");
  std::vector<Did> out;
  for (uint32_t i = 0; i < n; ++i) out.push_back(Did{r.fixed<32>()});
  return out;
}

void write_payload(ByteWriter& w, const TxPayload& payload) {
  std::visit(Overloaded{
                 [&](const RegisterDid& p) {
                   w.raw(p.key_root);
                   write_dids(w, p.guardians);
                   w.u8(p.threshold);
                 },
                 [&](const UpdateDocument& p) {
                   w.raw(p.did.id);
                   w.raw(p.new_key_root);
                 },
                 [&](const PublishRoot& p) {
                   w.u64(p.epoch);
                   w.felt(p.root);
                 },
                 [&](const ConfigureGuardians& p) {
                   w.raw(p.did.id);
                   write_dids(w, p.guardians);
                   w.u8(p.threshold);
                 },
                 [&](const InitiateRecovery& p) {
                   w.raw(p.did.id);
                   w.raw(p.proposed_key_root);
                 },
                 [&](const ApproveRecovery& p) {
                   w.raw(p.did.id);
                   w.raw(p.proposed_key_root);
                 },
                 [&](const CancelRecovery& p) { w.raw(p.did.id); },
                 [&](const FinalizeRecovery& p) { w.raw(p.did.id); },
             },
             payload);
}

TxPayload read_payload(ByteReader& r, uint8_t kind, size_t at) {
  switch (kind) {
    case 1: {
      RegisterDid p;
      p.key_root = r.fixed<32>();
      p.guardians = read_dids(r);
      p.threshold = r.u8();
      return p;
    }
    case 2:
      return UpdateDocument{Did{r.fixed<32>()}, r.fixed<32>()};
    case 3: {
      PublishRoot p;
      p.epoch = r.u64();
      p.root = r.felt();
      return p;
    }
    case 4: {
      ConfigureGuardians p;
      p.did = Did{r.fixed<32>()};
      p.guardians = read_dids(r);
      p.threshold = r.u8();
      return p;
    }
    case 5: {
      InitiateRecovery p;
      p.did = Did{r.fixed<32>()};
      p.proposed_key_root = r.fixed<32>();
      return p;
    }
    case 6: {
      ApproveRecovery p;
      p.did = Did{r.fixed<32>()};
      p.proposed_key_root = r.fixed<32>();
      return p;
    }
    case 7:
      return CancelRecovery{Did{r.fixed<32>()}};
    case 8:
      return FinalizeRecovery{Did{r.fixed<32>()}};
    default:
      throw DecodeError(at, "unknown tx kind");
  }
}

[[noreturn]] void reject(ErrorCode code, const std::string& rule) { throw Error(code, rule); }

std::string short_did(const Did& d) { return d.render().substr(0, 20) + "..."; }

bool guardian_set_ok(const std::vector<Did>& guardians, uint8_t threshold) {
  DidDocument probe;
  probe.guardians = guardians;
  probe.threshold = threshold;
  return probe.well_formed();
}

[[noreturn]] void log_fail(const std::string& what) { throw Error(ErrorCode::kParseError, "ledger log: " + what); }

}  // namespace

std::string_view tx_kind_name(const TxPayload& payload) { return kKindNames[payload.index()]; }

Bytes tx_signing_bytes(const Tx& tx) {
  ByteWriter w;
  w.u8(kTagTx);
  w.u8(static_cast<uint8_t>(tx.payload.index() + 1));
  w.raw(tx.signer.id);
  w.u64(tx.not_before);
  w.u64(tx.not_after);
  write_payload(w, tx.payload);
  return std::move(w).take();
}

Bytes encode_tx(const Tx& tx) {
  ByteWriter w;
  w.raw(tx_signing_bytes(tx));
  encode_sig(w, tx.signature);
  return std::move(w).take();
}

Tx decode_tx(std::span<const uint8_t> bytes) {
  ByteReader r(bytes);
  if (r.u8() != kTagTx) throw DecodeError(0, "not a ledger transaction");
  const size_t kind_at = r.offset();
  const uint8_t kind = r.u8();
  Tx tx;
  tx.signer.id = r.fixed<32>();
  tx.not_before = r.u64();
  tx.not_after = r.u64();
  tx.payload = read_payload(r, kind, kind_at);
  tx.signature = decode_sig(r);
  r.expect_done();
  return tx;
}

Digest32 tx_id(const Tx& tx) { return byte_hash(encode_tx(tx)); }

Tx make_tx(TxPayload payload, const Did& signer, KeyTree& keys, uint64_t not_before, uint64_t not_after) {
  Tx tx;
  tx.payload = std::move(payload);
  tx.signer = signer;
  tx.not_before = not_before;
  tx.not_after = not_after;
  tx.signature = keys.sign(tx_signing_bytes(tx));
  return tx;
}

Digest32 state_digest(const LedgerState& state) {
  ByteWriter w;
  w.u32(static_cast<uint32_t>(state.documents.size()));
  for (const auto& [did, doc] : state.documents) w.raw(canonical_encode(doc));
  w.u32(static_cast<uint32_t>(state.roots.size()));
  for (const auto& [did, records] : state.roots) {
    w.raw(did.id);
    w.u32(static_cast<uint32_t>(records.size()));
    for (const RootRecord& rec : records) {
      w.u64(rec.epoch);
      w.felt(rec.root);
      w.u64(rec.height);
    }
  }
  w.u32(static_cast<uint32_t>(state.recovery.size()));
  for (const auto& [did, rs] : state.recovery) {
    w.raw(did.id);
    w.u8(static_cast<uint8_t>(rs.status));
    w.raw(rs.proposed_key_root);
    w.u32(static_cast<uint32_t>(rs.approvals.size()));
    for (const Did& a : rs.approvals) w.raw(a.id);
    w.u64(rs.started_at);
    w.u64(rs.locked_at);
  }
  w.u32(static_cast<uint32_t>(state.used_indices.size()));
  for (const auto& [key, indices] : state.used_indices) {
    w.raw(key.first.id);
    w.raw(key.second);
    w.u32(static_cast<uint32_t>(indices.size()));
    for (uint32_t i : indices) w.u32(i);
  }
  return byte_hash(w.bytes());
}

Ledger::Ledger(LedgerConfig config) : config_(config) {}

void Ledger::apply(const Tx& tx) {
  const uint64_t h = height_;
  if (h < tx.not_before || h > tx.not_after) {
    reject(ErrorCode::kExpired, "height " + std::to_string(h) + " outside the tx window [" +
                                    std::to_string(tx.not_before) + ", " + std::to_string(tx.not_after) + "]");
  }
  auto& docs = state_.documents;

  Digest32 key_root{};
  if (const auto* reg = std::get_if<RegisterDid>(&tx.payload)) {
    if (docs.contains(tx.signer)) reject(ErrorCode::kAlreadyRegistered, short_did(tx.signer) + " already registered");
    if (Did::from_key_root(reg->key_root) != tx.signer) {
      reject(ErrorCode::kInvalidTransition, "RegisterDid signer must be derived from the registered key root");
    }
    key_root = reg->key_root;
  } else {
    auto it = docs.find(tx.signer);
    if (it == docs.end()) reject(ErrorCode::kUnknownDid, "signer " + short_did(tx.signer) + " is not registered");
    key_root = it->second.active_key_root;
  }
  if (!verify_sig(key_root, tx_signing_bytes(tx), tx.signature)) {
    reject(ErrorCode::kBadSignature, "signature does not verify under the signer's active key root");
  }
  const auto key = std::make_pair(tx.signer, key_root);
  if (auto it = state_.used_indices.find(key); it != state_.used_indices.end() && it->second.contains(tx.signature.index)) {
    reject(ErrorCode::kReplayedSignature, "one-time key " + std::to_string(tx.signature.index) + " already used");
  }

  auto target_doc = [&](const Did& did) -> DidDocument& {
    auto it = docs.find(did);
    if (it == docs.end()) reject(ErrorCode::kUnknownDid, short_did(did) + " is not registered");
    return it->second;
  };
  auto require_controller = [&](const Did& did) {
    if (did != tx.signer) reject(ErrorCode::kUnauthorized, "only the controller of " + short_did(did) + " may do this");
  };
  auto require_guardians_registered = [&](const std::vector<Did>& guardians) {
    for (const Did& g : guardians) {
      if (!docs.contains(g)) reject(ErrorCode::kUnknownDid, "guardian " + short_did(g) + " is not registered");
    }
  };
  auto require_no_recovery = [&](const Did& did) {
    if (state_.recovery.contains(did)) {
      reject(ErrorCode::kInvalidTransition, "a recovery is pending; cancel it first");
    }
  };
  auto require_guardian = [&](const DidDocument& doc) {
    if (std::find(doc.guardians.begin(), doc.guardians.end(), tx.signer) == doc.guardians.end()) {
      reject(ErrorCode::kNotGuardian, short_did(tx.signer) + " is not a guardian of " + short_did(doc.did));
    }
  };
  auto lock_if_threshold = [&](RecoveryState& rs, const DidDocument& doc) {
    if (rs.approvals.size() >= doc.threshold) {
      rs.status = RecoveryStatus::kTimeLocked;
      rs.locked_at = h;
    }
  };

  // Every branch finishes its checks before it mutates anything.
  std::visit(
      Overloaded{
          [&](const RegisterDid& p) {
            if (!guardian_set_ok(p.guardians, p.threshold)) {
              reject(ErrorCode::kInvalidTransition, "guardian threshold out of range or duplicate guardian");
            }
            require_guardians_registered(p.guardians);
            docs[tx.signer] = DidDocument{tx.signer, p.key_root, p.guardians, p.threshold, h};
          },
          [&](const UpdateDocument& p) {
            require_controller(p.did);
            DidDocument& doc = target_doc(p.did);
            require_no_recovery(p.did);
            doc.active_key_root = p.new_key_root;
            doc.updated_at = h;
          },
          [&](const PublishRoot& p) {
            auto it = state_.roots.find(tx.signer);
            const uint64_t expected = it == state_.roots.end() ? 0 : it->second.back().epoch + 1;
            if (p.epoch != expected) {
              reject(ErrorCode::kEpochGap, "expected epoch " + std::to_string(expected) + ", got " +
                                               std::to_string(p.epoch));
            }
            state_.roots[tx.signer].push_back({p.epoch, p.root, h});
          },
          [&](const ConfigureGuardians& p) {
            require_controller(p.did);
            DidDocument& doc = target_doc(p.did);
            require_no_recovery(p.did);
            if (!guardian_set_ok(p.guardians, p.threshold)) {
              reject(ErrorCode::kInvalidTransition, "guardian threshold out of range or duplicate guardian");
            }
            require_guardians_registered(p.guardians);
            doc.guardians = p.guardians;
            doc.threshold = p.threshold;
            doc.updated_at = h;
          },
          [&](const InitiateRecovery& p) {
            const DidDocument& doc = target_doc(p.did);
            require_guardian(doc);
            if (state_.recovery.contains(p.did)) {
              reject(ErrorCode::kInvalidTransition, "a recovery is already pending for " + short_did(p.did));
            }
            RecoveryState rs;
            rs.status = RecoveryStatus::kCollecting;
            rs.proposed_key_root = p.proposed_key_root;
            rs.approvals.insert(tx.signer);
            rs.started_at = h;
            lock_if_threshold(rs, doc);
            state_.recovery[p.did] = std::move(rs);
          },
          [&](const ApproveRecovery& p) {
            const DidDocument& doc = target_doc(p.did);
            require_guardian(doc);
            auto it = state_.recovery.find(p.did);
            if (it == state_.recovery.end()) {
              reject(ErrorCode::kNoPendingRecovery, "no recovery pending for " + short_did(p.did));
            }
            RecoveryState& rs = it->second;
            if (rs.proposed_key_root != p.proposed_key_root) {
              reject(ErrorCode::kInvalidTransition, "approval names a different proposed key root");
            }
            if (rs.approvals.contains(tx.signer)) {
              reject(ErrorCode::kDuplicateApproval, short_did(tx.signer) + " already approved");
            }
            if (rs.status == RecoveryStatus::kTimeLocked) {
              reject(ErrorCode::kInvalidTransition, "recovery is already time-locked");
            }
            rs.approvals.insert(tx.signer);
            lock_if_threshold(rs, doc);
          },
          [&](const CancelRecovery& p) {
            require_controller(p.did);
            target_doc(p.did);
            if (!state_.recovery.contains(p.did)) {
              reject(ErrorCode::kNoPendingRecovery, "no recovery pending for " + short_did(p.did));
            }
            state_.recovery.erase(p.did);
          },
          [&](const FinalizeRecovery& p) {
            DidDocument& doc = target_doc(p.did);
            auto it = state_.recovery.find(p.did);
            if (it == state_.recovery.end()) {
              reject(ErrorCode::kNoPendingRecovery, "no recovery pending for " + short_did(p.did));
            }
            if (it->second.status != RecoveryStatus::kTimeLocked) {
              reject(ErrorCode::kInvalidTransition, "recovery has not reached its approval threshold");
            }
            const uint64_t ready = it->second.locked_at + config_.timelock_blocks;
            if (h < ready) {
              reject(ErrorCode::kTimelockNotElapsed, "time lock ends at height " + std::to_string(ready));
            }
            doc.active_key_root = it->second.proposed_key_root;
            doc.updated_at = h;
            state_.recovery.erase(it);
          },
      },
      tx.payload);

  state_.used_indices[key].insert(tx.signature.index);
}

Receipt Ledger::submit(const Tx& tx) {
  std::unique_lock lock(mu_);
  apply(tx);
  queue_.push_back(tx);
  Receipt r;
  r.tx_id = tx_id(tx);
  r.height = height_;
  r.position = static_cast<uint32_t>(queue_.size() - 1);
  r.cost_units = (encode_tx(tx).size() + 31) / 32;
  return r;
}

uint64_t Ledger::tick() {
  std::unique_lock lock(mu_);
  blocks_.push_back({height_, std::move(queue_)});
  queue_.clear();
  sealed_ = state_;
  return ++height_;
}

uint64_t Ledger::height() const {
  std::shared_lock lock(mu_);
  return height_;
}

std::vector<Block> Ledger::blocks() const {
  std::shared_lock lock(mu_);
  return blocks_;
}

size_t Ledger::pending() const {
  std::shared_lock lock(mu_);
  return queue_.size();
}

LedgerState Ledger::snapshot() const {
  std::shared_lock lock(mu_);
  return state_;
}

LedgerState Ledger::sealed_snapshot() const {
  std::shared_lock lock(mu_);
  return sealed_;
}

DidDocument Ledger::resolve_did(const Did& did) const {
  std::shared_lock lock(mu_);
  auto it = state_.documents.find(did);
  if (it == state_.documents.end()) throw Error(ErrorCode::kUnknownDid, did.render() + " is not registered");
  return it->second;
}

bool Ledger::is_registered(const Did& did) const {
  std::shared_lock lock(mu_);
  return state_.documents.contains(did);
}

RootRecord Ledger::current_root(const Did& issuer) const {
  std::shared_lock lock(mu_);
  if (!state_.documents.contains(issuer)) throw Error(ErrorCode::kUnknownDid, issuer.render() + " is not registered");
  auto it = state_.roots.find(issuer);
  if (it == state_.roots.end()) throw Error(ErrorCode::kUnknownEpoch, "issuer has published no root");
  return it->second.back();
}

RootRecord Ledger::root_at_epoch(const Did& issuer, uint64_t epoch) const {
  std::shared_lock lock(mu_);
  if (!state_.documents.contains(issuer)) throw Error(ErrorCode::kUnknownDid, issuer.render() + " is not registered");
  auto it = state_.roots.find(issuer);
  if (it == state_.roots.end() || epoch >= it->second.size()) {
    throw Error(ErrorCode::kUnknownEpoch, "epoch " + std::to_string(epoch) + " was not published");
  }
  return it->second[epoch];
}

std::vector<RootRecord> Ledger::root_history(const Did& issuer) const {
  std::shared_lock lock(mu_);
  auto it = state_.roots.find(issuer);
  return it == state_.roots.end() ? std::vector<RootRecord>{} : it->second;
}

RecoveryState Ledger::recovery_state(const Did& did) const {
  std::shared_lock lock(mu_);
  auto it = state_.recovery.find(did);
  return it == state_.recovery.end() ? RecoveryState{} : it->second;
}

bool Ledger::index_used(const Did& did, const Digest32& key_root, uint32_t index) const {
  std::shared_lock lock(mu_);
  auto it = state_.used_indices.find({did, key_root});
  return it != state_.used_indices.end() && it->second.contains(index);
}

std::unique_ptr<Ledger> Ledger::replay(const std::vector<Block>& blocks, LedgerConfig config) {
  auto out = std::make_unique<Ledger>(config);
  for (const Block& b : blocks) {
    if (b.height != out->height_) log_fail("block height " + std::to_string(b.height) + " out of sequence");
    for (size_t i = 0; i < b.txs.size(); ++i) {
      try {
        out->submit(b.txs[i]);
      } catch (const Error& e) {
        log_fail("tx " + std::to_string(i) + " of block " + std::to_string(b.height) + " does not replay: " + e.what());
      }
    }
    out->tick();
  }
  return out;
}

Bytes Ledger::serialize() const {
  std::shared_lock lock(mu_);
  ByteWriter w;
  w.raw(kLogMagic);
  w.u16(kLogVersion);
  w.u64(config_.timelock_blocks);
  w.u8('\n');
  for (const Block& b : blocks_) {
    w.u64(b.height);
    w.u32(static_cast<uint32_t>(b.txs.size()));
    for (const Tx& tx : b.txs) {
      const Bytes enc = encode_tx(tx);
      w.u32(static_cast<uint32_t>(enc.size()));
      w.raw(enc);
    }
    w.u8('\n');
  }
  if (!queue_.empty()) {
    w.u64(kOpenBlock);
    w.u32(static_cast<uint32_t>(queue_.size()));
    for (const Tx& tx : queue_) {
      const Bytes enc = encode_tx(tx);
      w.u32(static_cast<uint32_t>(enc.size()));
      w.raw(enc);
    }
    w.u8('\n');
  }
  return std::move(w).take();
}

std::unique_ptr<Ledger> Ledger::deserialize(std::span<const uint8_t> bytes) {
  std::vector<Block> blocks;
  LedgerConfig config;
  try {
    ByteReader r(bytes);
    auto magic = r.fixed<4>();
    if (magic != kLogMagic) log_fail("bad magic");
    if (r.u16() != kLogVersion) log_fail("unsupported version");
    config.timelock_blocks = r.u64();
    if (r.u8() != '\n') log_fail("missing record separator");
    while (r.remaining() > 0) {
      Block b;
      b.height = r.u64();
      const uint32_t n = r.u32();
      for (uint32_t i = 0; i < n; ++i) {
        const uint32_t len = r.u32();
        b.txs.push_back(decode_tx(r.raw(len)));
      }
      if (r.u8() != '\n') log_fail("missing record separator");
      if (!blocks.empty() && blocks.back().height == kOpenBlock) log_fail("open block is not last");
      blocks.push_back(std::move(b));
    }
  } catch (const DecodeError& e) {
    log_fail(e.what());
  }
  std::vector<Tx> open;
  if (!blocks.empty() && blocks.back().height == kOpenBlock) {
    open = std::move(blocks.back().txs);
    blocks.pop_back();
    if (open.empty()) log_fail("empty open block");
  }
  auto out = replay(blocks, config);
  for (size_t i = 0; i < open.size(); ++i) {
    try {
      out->submit(open[i]);
    } catch (const Error& e) {
      log_fail("pending tx " + std::to_string(i) + " does not replay: " + e.what());
    }
  }
  return out;
}

void Ledger::save(const std::string& path) const {
  const Bytes bytes = serialize();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out.flush()) throw Error(ErrorCode::kIoError, "write failed for " + path);
}

std::unique_ptr<Ledger> Ledger::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path);
  const Bytes bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return deserialize(bytes);
}

}  // namespace zkdid
