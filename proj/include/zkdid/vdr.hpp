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
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <variant>
#include <vector>

#include "zkdid/bytes.hpp"
#include "zkdid/field.hpp"
#include "zkdid/identity.hpp"

namespace zkdid {

// Transaction payloads. The signer is carried on the Tx itself.

/// Signer must equal Did::from_key_root(key_root); the signature is checked
/// against key_root.
struct RegisterDid {
  Digest32 key_root{};
  std::vector<Did> guardians;
  uint8_t threshold = 0;
  bool operator==(const RegisterDid&) const = default;
};
/// Key rotation by the controller.
struct UpdateDocument {
  Did did;
  Digest32 new_key_root{};
  bool operator==(const UpdateDocument&) const = default;
};
/// Issuer is the signer.
struct PublishRoot {
  uint64_t epoch = 0;
  Felt root;
  bool operator==(const PublishRoot&) const = default;
};
struct ConfigureGuardians {
  Did did;
  std::vector<Did> guardians;
  uint8_t threshold = 0;
  bool operator==(const ConfigureGuardians&) const = default;
};
struct InitiateRecovery {
  Did did;
  Digest32 proposed_key_root{};
  bool operator==(const InitiateRecovery&) const = default;
};
/// Names the proposal being approved, so an approval cannot be carried over
/// to a different one.
struct ApproveRecovery {
  Did did;
  Digest32 proposed_key_root{};
  bool operator==(const ApproveRecovery&) const = default;
};
struct CancelRecovery {
  Did did;
  bool operator==(const CancelRecovery&) const = default;
};
struct FinalizeRecovery {
  Did did;
  bool operator==(const FinalizeRecovery&) const = default;
};

using TxPayload = std::variant<RegisterDid, UpdateDocument, PublishRoot, ConfigureGuardians, InitiateRecovery,
                               ApproveRecovery, CancelRecovery, FinalizeRecovery>;

std::string_view tx_kind_name(const TxPayload& payload);

struct Tx {
  TxPayload payload;
  Did signer;
  /// Inclusive height window in which the tx may be included.
  uint64_t not_before = 0;
  uint64_t not_after = std::numeric_limits<uint64_t>::max();
  HashSig signature;

  bool operator==(const Tx&) const = default;
};

/// tag 0x04 || kind || signer || window || payload. This is the signed message.
Bytes tx_signing_bytes(const Tx& tx);
/// Signing bytes followed by the signature.
Bytes encode_tx(const Tx& tx);
/// Throws DecodeError.
Tx decode_tx(std::span<const uint8_t> bytes);
Digest32 tx_id(const Tx& tx);

/// Builds and signs a tx with the next key of `keys`.
Tx make_tx(TxPayload payload, const Did& signer, KeyTree& keys, uint64_t not_before = 0,
           uint64_t not_after = std::numeric_limits<uint64_t>::max());

enum class RecoveryStatus : uint8_t { kNone = 0, kCollecting = 1, kTimeLocked = 2 };

struct RecoveryState {
  RecoveryStatus status = RecoveryStatus::kNone;
  Digest32 proposed_key_root{};
  std::set<Did> approvals;
  uint64_t started_at = 0;
  uint64_t locked_at = 0;

  bool operator==(const RecoveryState&) const = default;
};

struct RootRecord {
  uint64_t epoch = 0;
  Felt root;
  uint64_t height = 0;

  bool operator==(const RootRecord&) const = default;
};

/// Everything derived from the block list.
struct LedgerState {
  std::map<Did, DidDocument> documents;
  std::map<Did, std::vector<RootRecord>> roots;
  std::map<Did, RecoveryState> recovery;
  /// One-time key indices consumed per (did, key root).
  std::map<std::pair<Did, Digest32>, std::set<uint32_t>> used_indices;

  bool operator==(const LedgerState&) const = default;
};

struct Block {
  uint64_t height = 0;
  std::vector<Tx> txs;

  bool operator==(const Block&) const = default;
};

struct Receipt {
  Digest32 tx_id{};
  uint64_t height = 0;
  uint32_t position = 0;
  /// Encoded size in 32-byte words. Reported by bench only.
  uint64_t cost_units = 0;
};

struct LedgerConfig {
  uint64_t timelock_blocks = 100;
};

/// Append-only registry with logical block time. submit() validates a tx
/// against the state including earlier queued txs and applies it at the
/// current height; tick() seals the queue as the block at that height.
/// Rejected txs change nothing.
///
/// Single writer: submissions serialize on an exclusive lock; reads take a
/// shared lock and see the state after the last accepted tx.
class Ledger {
 public:
  explicit Ledger(LedgerConfig config = {});

  Ledger(const Ledger&) = delete;
  Ledger& operator=(const Ledger&) = delete;

  /// Throws BadSignature, Unauthorized, UnknownDid, InvalidTransition,
  /// EpochGap, NotGuardian, DuplicateApproval, TimelockNotElapsed,
  /// NoPendingRecovery, ReplayedSignature, Expired, AlreadyRegistered.
  Receipt submit(const Tx& tx);
  /// Seals pending txs (possibly none) and returns the new height.
  uint64_t tick();

  uint64_t height() const;
  const LedgerConfig& config() const { return config_; }
  std::vector<Block> blocks() const;
  size_t pending() const;
  LedgerState snapshot() const;
  /// State as of the last sealed block.
  LedgerState sealed_snapshot() const;

  /// Throws UnknownDid.
  DidDocument resolve_did(const Did& did) const;
  bool is_registered(const Did& did) const;
  /// Throws UnknownDid, or UnknownEpoch before the first publication.
  RootRecord current_root(const Did& issuer) const;
  /// Throws UnknownDid / UnknownEpoch.
  RootRecord root_at_epoch(const Did& issuer, uint64_t epoch) const;
  std::vector<RootRecord> root_history(const Did& issuer) const;
  RecoveryState recovery_state(const Did& did) const;
  bool index_used(const Did& did, const Digest32& key_root, uint32_t index) const;

  /// Rebuilds a ledger by re-applying every block from genesis.
  /// Throws ParseError if a block does not replay.
  static std::unique_ptr<Ledger> replay(const std::vector<Block>& blocks, LedgerConfig config = {});

  /// Binary log: "ZKDL" || version (2) || timelock (8) || '\n', then per
  /// sealed block: height (8) || count (4) || (len (4) || tx)* || '\n'.
  /// Unsealed txs follow as one last record with height 2^64 - 1.
  Bytes serialize() const;
  /// Throws ParseError.
  static std::unique_ptr<Ledger> deserialize(std::span<const uint8_t> bytes);
  /// Throws IoError / ParseError.
  void save(const std::string& path) const;
  static std::unique_ptr<Ledger> load(const std::string& path);

 private:
  void apply(const Tx& tx);

  LedgerConfig config_;
  uint64_t height_ = 0;
  std::vector<Block> blocks_;
  std::vector<Tx> queue_;
  LedgerState state_;
  LedgerState sealed_;
  mutable std::shared_mutex mu_;
};

/// Deterministic digest over a state; equal states give equal digests.
Digest32 state_digest(const LedgerState& state);

}  // namespace zkdid
