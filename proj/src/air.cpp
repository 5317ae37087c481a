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

#include "zkdid/air.hpp"

#include <algorithm>
#include <bit>
#include <string>

namespace zkdid {

namespace {

const std::vector<std::string>& trace_column_names() {
  static const std::vector<std::string> names{"x",  "k",   "l", "u2",    "u3",   "u6",   "y",
                                              "b",  "v",   "v_bit", "v_acc", "d_bit", "d_acc"};
  return names;
}

const std::vector<std::string>& public_column_names() {
  static const std::vector<std::string> names{
      "round_const", "sel_hash",   "sel_round",      "sel_last",  "sel_start",     "sel_fold_next",
      "sel_path_next", "sel_range", "sel_range_step", "sel_first", "sel_range_end", "sel_attr"};
  return names;
}

constexpr uint8_t kStatementTag = 0x02;

}  // namespace

Bytes canonical_encode(const PredicateStatement& stmt) {
  ByteWriter w;
  w.u8(kStatementTag);
  w.felt(stmt.accumulator_root);
  w.u64(stmt.epoch);
  w.u8(stmt.attribute_index);
  w.u8(stmt.attribute_count);
  w.u32(stmt.threshold);
  w.raw(stmt.nonce);
  w.str(stmt.issuer_did);
  return std::move(w).take();
}

PredicateStatement decode_statement(std::span<const uint8_t> bytes) {
  ByteReader r(bytes);
  if (r.u8() != kStatementTag) throw DecodeError(0, "not a statement encoding");
  PredicateStatement s;
  s.accumulator_root = r.felt();
  s.epoch = r.u64();
  s.attribute_index = r.u8();
  s.attribute_count = r.u8();
  s.threshold = r.u32();
  s.nonce = r.fixed<16>();
  s.issuer_did = r.str(1024);
  r.expect_done();
  return s;
}

size_t Trace::index_of(std::string_view name) const {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw Error(ErrorCode::kColumnMismatch, "no column named " + std::string(name));
  return static_cast<size_t>(it - names.begin());
}

unsigned ConstraintSet::max_degree() const {
  unsigned d = 1;
  for (const auto& t : transitions) d = std::max(d, t.degree);
  return d;
}

PredicateLayout PredicateLayout::make(const AirConfig& config, const PredicateStatement& stmt) {
  PredicateLayout layout{config, stmt.attribute_count, stmt.attribute_index};
  if (stmt.attribute_count == 0 || stmt.attribute_index >= stmt.attribute_count) {
    throw Error(ErrorCode::kAttributeOutOfRange,
                "attribute index " + std::to_string(stmt.attribute_index) + " not below count " +
                    std::to_string(stmt.attribute_count));
  }
  const size_t n = config.trace_length;
  if (n < 4 || !std::has_single_bit(n) || config.mimc_rounds < 2 || config.range_bits == 0 ||
      config.range_bits > 32 || config.tree_depth == 0 || config.tree_depth > 31) {
    throw Error(ErrorCode::kTraceTooShort, "unsupported circuit configuration");
  }
  // The last hash row must precede row N-1, which has no successor and so is
  // not covered by transition constraints. The range rows sit inside the
  // hash rows, where v is held constant.
  if (layout.hash_rows() + 1 > n || config.range_bits > layout.hash_rows()) {
    throw Error(ErrorCode::kTraceTooShort,
                std::to_string(layout.hash_rows()) + " hash rows do not fit a trace of " +
                    std::to_string(n));
  }
  return layout;
}

ConstraintSet predicate_constraints(const PredicateStatement& stmt, const AirConfig& config) {
  const PredicateLayout layout = PredicateLayout::make(config, stmt);
  const size_t n = config.trace_length;
  const unsigned rounds = config.mimc_rounds;
  const unsigned bits = config.range_bits;
  const MimcParams mimc = config.mimc();

  ConstraintSet cs;
  cs.trace_length = n;
  cs.trace_columns = trace_column_names();
  cs.public_columns = public_column_names();
  cs.public_values.assign(col::kPublicWidth, std::vector<Felt>(n));

  auto& pv = cs.public_values;
  const Felt one = Felt::one();
  for (size_t t = 0; t < layout.hash_rows(); ++t) {
    const size_t block = t / rounds;
    const size_t i = t % rounds;
    pv[col::kRoundConst][t] = mimc.constants()[i];
    pv[col::kHash][t] = one;
    if (i + 1 < rounds) {
      pv[col::kRound][t] = one;
    } else {
      pv[col::kLast][t] = one;
      if (block + 1 < layout.attribute_count) pv[col::kFoldNext][t] = one;
      else if (block + 1 < layout.blocks()) pv[col::kPathNext][t] = one;
    }
    if (i == 0) pv[col::kStart][t] = one;
  }
  for (size_t t = 0; t < bits; ++t) {
    pv[col::kRange][t] = one;
    if (t + 1 < bits) pv[col::kRangeStep][t] = one;
  }
  pv[col::kFirst][0] = one;
  pv[col::kRangeEnd][bits - 1] = one;
  pv[col::kAttr][layout.attribute_row()] = one;

  const Felt threshold(stmt.threshold);
  const Felt two(2);
  auto u_of = [](const Frame& f) { return f.cur[col::kX] + f.cur[col::kK] + f.pub[col::kRoundConst]; };

  auto add = [&cs](std::string name, unsigned degree, std::string rows,
                   std::function<Felt(const Frame&)> eval) {
    cs.transitions.push_back({std::move(name), degree, std::move(rows), std::move(eval)});
  };

  // (i) MiMC rounds, x' = (x + k + c)^7 split through u2 = u^2, u3 = u^3, u6 = u^6.
  add("mimc_square", 3, "hash lane", [u_of](const Frame& f) {
    Felt u = u_of(f);
    return f.pub[col::kHash] * (f.cur[col::kU2] - u * u);
  });
  add("mimc_cube", 3, "hash lane", [u_of](const Frame& f) {
    return f.pub[col::kHash] * (f.cur[col::kU3] - f.cur[col::kU2] * u_of(f));
  });
  add("mimc_sixth", 3, "hash lane", [](const Frame& f) {
    return f.pub[col::kHash] * (f.cur[col::kU6] - f.cur[col::kU3] * f.cur[col::kU3]);
  });
  add("mimc_round", 3, "hash lane, not last round of a block", [u_of](const Frame& f) {
    return f.pub[col::kRound] * (f.next[col::kX] - f.cur[col::kU6] * u_of(f));
  });
  add("mimc_key_const", 2, "hash lane, not last round of a block", [](const Frame& f) {
    return f.pub[col::kRound] * (f.next[col::kK] - f.cur[col::kK]);
  });
  add("mimc_left_const", 2, "hash lane, not last round of a block", [](const Frame& f) {
    return f.pub[col::kRound] * (f.next[col::kL] - f.cur[col::kL]);
  });
  add("mimc_dir_const", 2, "hash lane, not last round of a block", [](const Frame& f) {
    return f.pub[col::kRound] * (f.next[col::kB] - f.cur[col::kB]);
  });
  add("mimc_block_start", 2, "first row of each block", [](const Frame& f) {
    return f.pub[col::kStart] * (f.cur[col::kX] - f.cur[col::kL]);
  });
  // h2 output: perm + l + r.
  add("mimc_output", 3, "last row of each block", [u_of](const Frame& f) {
    return f.pub[col::kLast] *
           (f.cur[col::kY] - f.cur[col::kU6] * u_of(f) - f.cur[col::kL] - f.cur[col::kK]);
  });
  add("fold_link", 2, "last row of a commitment block", [](const Frame& f) {
    return f.pub[col::kFoldNext] * (f.next[col::kL] - f.cur[col::kY]);
  });
  // (ii) booleanity of direction bits, (iii) operand swap by direction.
  add("path_dir_bool", 3, "last row before a path block", [](const Frame& f) {
    Felt b = f.next[col::kB];
    return f.pub[col::kPathNext] * (b * b - b);
  });
  add("path_left", 3, "last row before a path block", [one](const Frame& f) {
    return f.pub[col::kPathNext] * (one - f.next[col::kB]) * (f.next[col::kL] - f.cur[col::kY]);
  });
  add("path_right", 3, "last row before a path block", [](const Frame& f) {
    return f.pub[col::kPathNext] * f.next[col::kB] * (f.next[col::kK] - f.cur[col::kY]);
  });
  // The compared value is one constant carried through the whole trace.
  add("value_const", 2, "hash rows", [](const Frame& f) {
    return f.pub[col::kHash] * (f.next[col::kV] - f.cur[col::kV]);
  });
  add("attribute_link", 2, "first row of the compared attribute's block", [](const Frame& f) {
    return f.pub[col::kAttr] * (f.cur[col::kK] - f.cur[col::kV]);
  });
  // (iv) bit recomposition, MSB first.
  add("range_v_bool", 3, "range rows", [](const Frame& f) {
    Felt b = f.cur[col::kVBit];
    return f.pub[col::kRange] * (b * b - b);
  });
  add("range_d_bool", 3, "range rows", [](const Frame& f) {
    Felt b = f.cur[col::kDBit];
    return f.pub[col::kRange] * (b * b - b);
  });
  add("range_v_init", 2, "row 0", [](const Frame& f) {
    return f.pub[col::kFirst] * (f.cur[col::kVAcc] - f.cur[col::kVBit]);
  });
  add("range_d_init", 2, "row 0", [](const Frame& f) {
    return f.pub[col::kFirst] * (f.cur[col::kDAcc] - f.cur[col::kDBit]);
  });
  add("range_v_step", 2, "range rows but the last", [two](const Frame& f) {
    return f.pub[col::kRangeStep] * (f.next[col::kVAcc] - two * f.cur[col::kVAcc] - f.next[col::kVBit]);
  });
  add("range_d_step", 2, "range rows but the last", [two](const Frame& f) {
    return f.pub[col::kRangeStep] * (f.next[col::kDAcc] - two * f.cur[col::kDAcc] - f.next[col::kDBit]);
  });
  add("range_v_recompose", 2, "last range row", [](const Frame& f) {
    return f.pub[col::kRangeEnd] * (f.cur[col::kVAcc] - f.cur[col::kV]);
  });
  // (v) v - T - d = 0 with v, d < 2^bits gives v >= T over the integers.
  add("compare", 2, "last range row", [threshold](const Frame& f) {
    return f.pub[col::kRangeEnd] * (f.cur[col::kV] - threshold - f.cur[col::kDAcc]);
  });

  // (vi) the hash lane ends at the published accumulator root.
  cs.boundaries.push_back({"accumulator_root", col::kY, layout.root_row(), stmt.accumulator_root});
  return cs;
}

Trace build_trace(const PredicateStatement& stmt, const PredicateWitness& wit, const AirConfig& config,
                  Rng& rng) {
  const PredicateLayout layout = PredicateLayout::make(config, stmt);
  if (wit.attrs.size() != layout.attribute_count) {
    throw Error(ErrorCode::kAttributeOutOfRange,
                "witness has " + std::to_string(wit.attrs.size()) + " attributes, statement expects " +
                    std::to_string(layout.attribute_count));
  }
  for (uint32_t a : wit.attrs) {
    if (a >= config.value_bound()) {
      throw Error(ErrorCode::kAttributeOutOfRange,
                  "attribute value " + std::to_string(a) + " exceeds " +
                      std::to_string(config.range_bits) + " bits");
    }
  }
  const uint64_t v = wit.attrs[layout.attribute_index];
  if (stmt.threshold >= config.value_bound() || v < stmt.threshold) {
    throw Error(ErrorCode::kPredicateUnsatisfied,
                "attribute below threshold " + std::to_string(stmt.threshold));
  }
  const MimcParams mimc = config.mimc();
  if (wit.path.depth() != config.tree_depth || wit.path.index != wit.slot_index) {
    throw Error(ErrorCode::kMembershipMismatch, "membership path does not match the tree shape");
  }
  const Felt commitment = commit_attributes(wit.attrs, wit.salt, mimc);
  if (!alg_verify(stmt.accumulator_root, commitment, wit.path, mimc)) {
    throw Error(ErrorCode::kMembershipMismatch, "credential commitment is not under the accumulator root");
  }

  const size_t n = config.trace_length;
  const unsigned rounds = config.mimc_rounds;
  const unsigned bits = config.range_bits;

  Trace trace;
  trace.names = trace_column_names();
  trace.columns.assign(col::kTraceWidth, std::vector<Felt>(n));
  auto& c = trace.columns;

  // Padding first; the constrained regions overwrite their cells below.
  for (size_t k = 0; k < col::kTraceWidth; ++k) {
    for (size_t t = layout.hash_rows(); t < n; ++t) c[k][t] = rng.next_felt();
  }

  Felt cur;
  for (unsigned h = 0; h < layout.blocks(); ++h) {
    Felt left, key, dir;
    if (h == 0) {
      left = wit.salt;
      key = Felt(wit.attrs[0]);
    } else if (h < layout.attribute_count) {
      left = cur;
      key = Felt(wit.attrs[h]);
    } else {
      const unsigned level = h - layout.attribute_count;
      const Felt sibling = wit.path.siblings[level];
      if (wit.path.direction(level)) {
        left = sibling;
        key = cur;
        dir = Felt::one();
      } else {
        left = cur;
        key = sibling;
      }
    }
    Felt x = left;
    for (unsigned i = 0; i < rounds; ++i) {
      const size_t t = size_t{h} * rounds + i;
      const Felt u = x + key + mimc.constants()[i];
      const Felt u2 = u * u;
      const Felt u3 = u2 * u;
      const Felt u6 = u3 * u3;
      c[col::kX][t] = x;
      c[col::kK][t] = key;
      c[col::kL][t] = left;
      c[col::kB][t] = dir;
      c[col::kU2][t] = u2;
      c[col::kU3][t] = u3;
      c[col::kU6][t] = u6;
      x = u6 * u;
      if (i + 1 == rounds) {
        cur = x + left + key;
        c[col::kY][t] = cur;
      }
    }
  }

  const uint64_t d = v - stmt.threshold;
  for (size_t t = 0; t <= layout.hash_rows(); ++t) c[col::kV][t] = Felt(v);
  for (size_t t = 0; t < bits; ++t) {
    const unsigned shift = bits - 1 - static_cast<unsigned>(t);
    c[col::kVBit][t] = Felt((v >> shift) & 1);
    c[col::kVAcc][t] = Felt(v >> shift);
    c[col::kDBit][t] = Felt((d >> shift) & 1);
    c[col::kDAcc][t] = Felt(d >> shift);
  }
  // Range columns are free outside [0, bits).
  for (size_t k : {col::kVBit, col::kVAcc, col::kDBit, col::kDAcc}) {
    for (size_t t = bits; t < layout.hash_rows(); ++t) c[k][t] = rng.next_felt();
  }
  return trace;
}

CheckReport check_trace(const Trace& trace, const ConstraintSet& cs) {
  if (trace.names != cs.trace_columns || trace.width() != cs.trace_columns.size()) {
    throw Error(ErrorCode::kColumnMismatch, "trace columns differ from the constraint set");
  }
  const size_t n = cs.trace_length;
  for (const auto& column : trace.columns) {
    if (column.size() != n) throw Error(ErrorCode::kColumnMismatch, "trace column length mismatch");
  }
  const size_t width = trace.width();
  const size_t pub_width = cs.public_values.size();
  std::vector<Felt> cur(width), next(width), pub(pub_width);
  for (size_t t = 0; t + 1 < n; ++t) {
    for (size_t k = 0; k < width; ++k) {
      cur[k] = trace.columns[k][t];
      next[k] = trace.columns[k][t + 1];
    }
    for (size_t k = 0; k < pub_width; ++k) pub[k] = cs.public_values[k][t];
    const Frame frame{cur, next, pub};
    for (const auto& tc : cs.transitions) {
      if (!tc.eval(frame).is_zero()) return {false, tc.name, t};
    }
  }
  for (const auto& bc : cs.boundaries) {
    if (trace.columns.at(bc.column).at(bc.row) != bc.value) return {false, bc.name, bc.row};
  }
  return {};
}

}  // namespace zkdid
