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

#include "zkdid/accumulator.hpp"

#include <fstream>
#include <mutex>
#include <sstream>

#include "zkdid/error.hpp"

namespace zkdid {

namespace {

constexpr const char* kHeader = "ZKDA";

[[noreturn]] void parse_fail(const std::string& what) {
  throw Error(ErrorCode::kParseError, "accumulator file: " + what);
}

}  // namespace

Accumulator::Accumulator(unsigned depth, unsigned mimc_rounds)
    : depth_(depth), mimc_(mimc_rounds), levels_(depth + 1) {
  if (depth == 0 || depth > 31) throw Error(ErrorCode::kInvalidParams, "accumulator depth must be in [1, 31]");
  zeros_ = zero_subtree_roots(depth, mimc_);
  history_.push_back({0, zeros_[depth]});
}

Accumulator::Accumulator(const Accumulator& other) : depth_(other.depth_), mimc_(other.mimc_) {
  std::shared_lock lock(other.mu_);
  zeros_ = other.zeros_;
  levels_ = other.levels_;
  occupied_ = other.occupied_;
  next_slot_ = other.next_slot_;
  history_ = other.history_;
}

Accumulator& Accumulator::operator=(const Accumulator& other) {
  if (this == &other) return *this;
  Accumulator copy(other);
  std::unique_lock lock(mu_);
  depth_ = copy.depth_;
  mimc_ = copy.mimc_;
  zeros_ = std::move(copy.zeros_);
  levels_ = std::move(copy.levels_);
  occupied_ = std::move(copy.occupied_);
  next_slot_ = copy.next_slot_;
  history_ = std::move(copy.history_);
  return *this;
}

uint64_t Accumulator::epoch() const {
  std::shared_lock lock(mu_);
  return history_.back().epoch;
}

Felt Accumulator::root() const {
  std::shared_lock lock(mu_);
  return history_.back().root;
}

Felt Accumulator::root_at(uint64_t epoch) const {
  std::shared_lock lock(mu_);
  if (epoch >= history_.size()) {
    throw Error(ErrorCode::kUnknownEpoch, "epoch " + std::to_string(epoch) + " has not happened");
  }
  return history_[epoch].root;
}

std::vector<EpochRoot> Accumulator::history() const {
  std::shared_lock lock(mu_);
  return history_;
}

std::map<uint32_t, Felt> Accumulator::occupied() const {
  std::shared_lock lock(mu_);
  return occupied_;
}

bool Accumulator::is_occupied(uint32_t slot) const {
  std::shared_lock lock(mu_);
  return occupied_.contains(slot);
}

uint64_t Accumulator::slots_used() const {
  std::shared_lock lock(mu_);
  return next_slot_;
}

Felt Accumulator::node(unsigned level, uint64_t index) const {
  auto it = levels_[level].find(index);
  return it == levels_[level].end() ? zeros_[level] : it->second;
}

void Accumulator::set_leaf(uint32_t slot, Felt value) {
  uint64_t index = slot;
  for (unsigned level = 0;; ++level) {
    if (value == zeros_[level]) levels_[level].erase(index);
    else levels_[level][index] = value;
    if (level == depth_) break;
    const Felt sibling = node(level, index ^ 1);
    value = (index & 1) ? h2(sibling, value, mimc_) : h2(value, sibling, mimc_);
    index >>= 1;
  }
  history_.push_back({history_.back().epoch + 1, node(depth_, 0)});
}

uint32_t Accumulator::add(Felt commitment) {
  std::unique_lock lock(mu_);
  if (next_slot_ >= capacity()) {
    throw Error(ErrorCode::kCapacityExhausted, "all " + std::to_string(capacity()) + " slots used");
  }
  const auto slot = static_cast<uint32_t>(next_slot_++);
  occupied_[slot] = commitment;
  set_leaf(slot, commitment);
  return slot;
}

uint64_t Accumulator::revoke(uint32_t slot) {
  std::unique_lock lock(mu_);
  if (!occupied_.contains(slot)) {
    throw Error(ErrorCode::kSlotNotOccupied, "slot " + std::to_string(slot) + " is not occupied");
  }
  occupied_.erase(slot);
  set_leaf(slot, Felt::zero());
  return history_.back().epoch;
}

MembershipWitness Accumulator::witness_locked(uint32_t slot) const {
  if (!occupied_.contains(slot)) {
    throw Error(ErrorCode::kSlotNotOccupied, "slot " + std::to_string(slot) + " is not occupied");
  }
  MembershipWitness w;
  w.slot = slot;
  w.epoch = history_.back().epoch;
  w.path.index = slot;
  uint64_t index = slot;
  for (unsigned level = 0; level < depth_; ++level, index >>= 1) {
    w.path.siblings.push_back(node(level, index ^ 1));
  }
  return w;
}

MembershipWitness Accumulator::witness(uint32_t slot) const {
  std::shared_lock lock(mu_);
  return witness_locked(slot);
}

MembershipWitness Accumulator::refresh(const MembershipWitness& stale) const {
  std::shared_lock lock(mu_);
  return witness_locked(stale.slot);
}

std::string Accumulator::serialize() const {
  std::shared_lock lock(mu_);
  std::ostringstream out;
  out << kHeader << ' ' << depth_ << ' ' << mimc_.rounds() << ' ' << history_.back().epoch << ' ' << next_slot_
      << '\n';
  for (const auto& [slot, c] : occupied_) out << "S " << slot << ' ' << c.value() << '\n';
  for (const auto& h : history_) out << "H " << h.epoch << ' ' << h.root.value() << '\n';
  return out.str();
}

Accumulator Accumulator::deserialize(const std::string& text) {
  std::istringstream in(text);
  std::string tag;
  unsigned depth = 0, rounds = 0;
  uint64_t epoch = 0, next_slot = 0;
  if (!(in >> tag >> depth >> rounds >> epoch >> next_slot) || tag != kHeader) parse_fail("bad header");
  if (depth == 0 || depth > 31 || rounds == 0 || rounds > 255) parse_fail("bad header values");
  Accumulator acc(depth, rounds);
  if (next_slot > acc.capacity()) parse_fail("slot counter exceeds capacity");
  acc.history_.clear();
  std::map<uint32_t, Felt> slots;
  auto read_felt = [&](uint64_t& v) {
    if (!(in >> v) || v >= Felt::kModulus) parse_fail("bad field element");
  };
  while (in >> tag) {
    uint64_t a = 0, b = 0;
    if (!(in >> a)) parse_fail("truncated record");
    read_felt(b);
    if (tag == "S") {
      if (a >= next_slot || slots.contains(static_cast<uint32_t>(a))) parse_fail("bad slot record");
      slots[static_cast<uint32_t>(a)] = Felt::from_canonical(b);
    } else if (tag == "H") {
      if (a != acc.history_.size()) parse_fail("history out of order");
      acc.history_.push_back({a, Felt::from_canonical(b)});
    } else {
      parse_fail("unknown record " + tag);
    }
  }
  if (acc.history_.empty() || acc.history_.back().epoch != epoch) parse_fail("history does not end at epoch");
  if (acc.history_.front().root != acc.zeros_[depth]) parse_fail("genesis root mismatch");

  const auto history = std::move(acc.history_);
  acc.history_ = {history.front()};
  for (const auto& [slot, c] : slots) {
    acc.occupied_[slot] = c;
    acc.set_leaf(slot, c);
  }
  acc.next_slot_ = next_slot;
  if (acc.history_.back().root != history.back().root) parse_fail("leaves do not match the stored root");
  acc.history_ = history;
  return acc;
}

void Accumulator::save(const std::string& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path);
  out << serialize();
  if (!out.flush()) throw Error(ErrorCode::kIoError, "write failed for " + path);
}

Accumulator Accumulator::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return deserialize(buf.str());
}

}  // namespace zkdid
