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

#include "cli/common.hpp"

#include <fstream>
#include <sstream>

#include "zkdid/error.hpp"

namespace zkdid::cli {

using nlohmann::json;

namespace {

[[noreturn]] void file_fail(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::kParseError, path + ": " + what);
}

template <typename T>
T get(const json& j, const char* key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) file_fail(path, std::string("missing field ") + key);
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    file_fail(path, std::string("bad field ") + key);
  }
}

void expect_format(const json& j, const char* format, const std::string& path) {
  if (get<std::string>(j, "format", path) != format) file_fail(path, std::string("expected format ") + format);
}

}  // namespace

Rng derive_rng(uint64_t seed, std::string_view label) { return Rng(seed).derive(label); }

Seed32 derive_seed(uint64_t seed, std::string_view label) {
  Rng rng = derive_rng(seed, label);
  return rng.next_array<32>();
}

ProofParams params_by_name(std::string_view name) {
  if (name == "toy") return ProofParams::toy();
  if (name == "default") return ProofParams::standard();
  throw Error(ErrorCode::kInvalidParams, "unknown parameter set '" + std::string(name) + "' (toy, default)");
}

std::string params_name(const ProofParams& p) {
  if (p == ProofParams::toy()) return "toy";
  if (p == ProofParams::standard()) return "default";
  return "custom";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path);
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out.flush()) throw Error(ErrorCode::kIoError, "write failed for " + path);
}

json read_json(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    file_fail(path, e.what());
  }
}

KeyFile KeyFile::load(const std::string& path) {
  const json j = read_json(path);
  expect_format(j, "zkdid-key/1", path);
  KeyFile k;
  k.name = get<std::string>(j, "name", path);
  k.did = Did::parse(get<std::string>(j, "did", path));
  const Bytes seed = from_hex(get<std::string>(j, "seed", path));
  if (seed.size() != k.seed.size()) file_fail(path, "seed must be 32 bytes");
  std::copy(seed.begin(), seed.end(), k.seed.begin());
  k.height = get<unsigned>(j, "height", path);
  k.next_index = get<uint32_t>(j, "next_index", path);
  return k;
}

void KeyFile::save(const std::string& path) const {
  json j = {{"format", "zkdid-key/1"},
            {"name", name},
            {"did", did.render()},
            {"seed", to_hex(seed)},
            {"height", height},
            {"next_index", next_index}};
  write_file(path, j.dump(2) + "\n");
}

IssuerFile IssuerFile::load(const std::string& path) {
  const json j = read_json(path);
  expect_format(j, "zkdid-issuer/1", path);
  IssuerFile f;
  f.did = Did::parse(get<std::string>(j, "did", path));
  f.schema = get<std::string>(j, "schema", path);
  f.params = get<std::string>(j, "params", path);
  f.accumulator = get<std::string>(j, "accumulator", path);
  return f;
}

void IssuerFile::save(const std::string& path) const {
  json j = {{"format", "zkdid-issuer/1"},
            {"did", did.render()},
            {"schema", schema},
            {"params", params},
            {"accumulator", accumulator}};
  write_file(path, j.dump(2) + "\n");
}

}  // namespace zkdid::cli
