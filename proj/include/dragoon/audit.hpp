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

#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

namespace dragoon {

struct PartyId {
  std::string name;

  friend auto operator<=>(const PartyId&, const PartyId&) = default;
  friend std::ostream& operator<<(std::ostream& os, const PartyId& p) { return os << p.name; }
};

using Coins = std::uint64_t;

/// One line of the audit trail. Ledger records carry a party and amount;
/// network and contract records carry a payload digest.
struct AuditRecord {
  std::uint64_t clock = 0;
  std::string actor;
  std::string kind;
  std::string party;
  std::optional<Coins> amount;
  std::string digest;

  friend bool operator==(const AuditRecord&, const AuditRecord&) = default;

  std::string to_line() const {
    nlohmann::ordered_json j;
    j["clock"] = clock;
    j["actor"] = actor;
    j["kind"] = kind;
    if (!party.empty()) j["party"] = party;
    if (amount) j["amount"] = *amount;
    if (!digest.empty()) j["digest"] = digest;
    return j.dump();
  }
};

class AuditLog {
 public:
  void append(AuditRecord r) { records_.push_back(std::move(r)); }

  const std::vector<AuditRecord>& records() const { return records_; }

  std::size_t count(std::string_view kind) const {
    std::size_t n = 0;
    for (const auto& r : records_) n += r.kind == kind;
    return n;
  }

  /// Line-delimited JSON, one record per line.
  std::string dump() const {
    std::string out;
    for (const auto& r : records_) {
      out += r.to_line();
      out += '\n';
    }
    return out;
  }

 private:
  std::vector<AuditRecord> records_;
};

}  // namespace dragoon
