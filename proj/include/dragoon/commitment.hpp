// Copyright 2026 The Dragoon-Sim Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstdint>

#include "dragoon/bytes.hpp"
#include "dragoon/hash.hpp"
#include "dragoon/rng.hpp"

namespace dragoon {

inline constexpr std::size_t kSecurityBits = 128;

struct CommitKey {
  std::array<std::uint8_t, kSecurityBits / 8> bytes{};

  static CommitKey random(Rng& rng) {
    CommitKey k;
    rng.fill(k.bytes);
    return k;
  }

  friend bool operator==(const CommitKey&, const CommitKey&) = default;
};

struct Commitment {
  Digest digest;

  friend bool operator==(const Commitment&, const Commitment&) = default;
  friend auto operator<=>(const Commitment&, const Commitment&) = default;
};

/// Hash commitment H(len(msg) || msg || len(key) || key).
inline Commitment commit(ByteView msg, const CommitKey& key) {
  ByteWriter w;
  w.field(msg).field(key.bytes);
  return {hash(w.bytes())};
}

inline bool open(const Commitment& comm, ByteView msg, const CommitKey& key) {
  return commit(msg, key) == comm;
}

}  // namespace dragoon
