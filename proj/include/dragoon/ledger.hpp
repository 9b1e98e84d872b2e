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

#include <cstdint>
#include <map>
#include <string_view>
#include <vector>

#include "dragoon/audit.hpp"

namespace dragoon {

enum class LedgerEventKind { kFrozen, kNoFund, kPaid, kPayRefused, kRefund };

inline std::string_view to_string(LedgerEventKind k) {
  switch (k) {
    case LedgerEventKind::kFrozen: return "frozen";
    case LedgerEventKind::kNoFund: return "nofund";
    case LedgerEventKind::kPaid: return "paid";
    case LedgerEventKind::kPayRefused: return "pay-refused";
    case LedgerEventKind::kRefund: return "refund";
  }
  return "?";
}

struct LedgerEvent {
  std::uint64_t clock;
  LedgerEventKind kind;
  PartyId from;
  PartyId to;
  Coins amount;
};

enum class FreezeOutcome { kFrozen, kNoFund };
enum class PayOutcome { kPaid, kInsufficientEscrow };

/// Coin ledger with per-contract escrow. Every freeze/pay/refund emits
/// exactly one event, whether or not its guard held.
class Ledger {
 public:
  void set_clock(std::uint64_t clock) { clock_ = clock; }
  void attach(AuditLog* log) { log_ = log; }

  /// Genesis allocation, before any protocol run.
  void deposit(const PartyId& party, Coins amount) { balances_[party] += amount; }

  Coins balance(const PartyId& party) const {
    auto it = balances_.find(party);
    return it == balances_.end() ? 0 : it->second;
  }

  Coins escrow(const PartyId& contract) const {
    auto it = escrow_.find(contract);
    return it == escrow_.end() ? 0 : it->second;
  }

  FreezeOutcome freeze(const PartyId& from, const PartyId& contract, Coins amount) {
    if (balance(from) < amount) {
      emit(LedgerEventKind::kNoFund, from, contract, amount);
      return FreezeOutcome::kNoFund;
    }
    balances_[from] -= amount;
    escrow_[contract] += amount;
    emit(LedgerEventKind::kFrozen, from, contract, amount);
    return FreezeOutcome::kFrozen;
  }

  PayOutcome pay(const PartyId& contract, const PartyId& to, Coins amount) {
    return release(contract, to, amount, LedgerEventKind::kPaid);
  }

  /// Same transfer as pay(), logged separately so fairness comparisons can
  /// tell payouts from leftover returns.
  PayOutcome refund(const PartyId& contract, const PartyId& to, Coins amount) {
    return release(contract, to, amount, LedgerEventKind::kRefund);
  }

  Coins total() const {
    Coins t = 0;
    for (const auto& [_, v] : balances_) t += v;
    for (const auto& [_, v] : escrow_) t += v;
    return t;
  }

  const std::map<PartyId, Coins>& balances() const { return balances_; }
  const std::vector<LedgerEvent>& events() const { return events_; }

 private:
  PayOutcome release(const PartyId& contract, const PartyId& to, Coins amount,
                     LedgerEventKind kind) {
    if (escrow(contract) < amount) {
      emit(LedgerEventKind::kPayRefused, contract, to, amount);
      return PayOutcome::kInsufficientEscrow;
    }
    escrow_[contract] -= amount;
    balances_[to] += amount;
    emit(kind, contract, to, amount);
    return PayOutcome::kPaid;
  }

  void emit(LedgerEventKind kind, const PartyId& from, const PartyId& to, Coins amount) {
    events_.push_back({clock_, kind, from, to, amount});
    if (log_) {
      const bool outbound = kind == LedgerEventKind::kPaid || kind == LedgerEventKind::kRefund ||
                            kind == LedgerEventKind::kPayRefused;
      log_->append({clock_, "ledger", std::string(to_string(kind)),
                    outbound ? to.name : from.name, amount, {}});
    }
  }

  std::map<PartyId, Coins> balances_;
  std::map<PartyId, Coins> escrow_;
  std::vector<LedgerEvent> events_;
  std::uint64_t clock_ = 0;
  AuditLog* log_ = nullptr;
};

}  // namespace dragoon
