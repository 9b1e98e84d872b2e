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

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dragoon/ledger.hpp"
#include "dragoon/poqoea.hpp"
#include "dragoon/sim/scenario.hpp"

namespace dragoon::sim {

/// The ideal HIT functionality over plaintext answers, on its own ledger
/// account. Shares no code with the contract.
///
/// Phase 2 approval is driven by the caller: answer() is an approved
/// delivery, and the K-th distinct answer closes the phase.
class IdealHit {
 public:
  enum class Phase { kIdle, kCollectAnswers, kEvaluate, kClosed };

  struct Decision {
    PartyId worker;
    bool paid;
    std::string reason;
  };

  IdealHit(PartyId self, Ledger& ledger, AuditLog* log = nullptr)
      : self_(std::move(self)), ledger_(&ledger), log_(log) {}

  bool publish(const PartyId& requester, const TaskSpec& task) {
    if (phase_ != Phase::kIdle) return false;
    if (ledger_->freeze(requester, self_, task.budget) != FreezeOutcome::kFrozen) return false;
    requester_ = requester;
    task_ = task;
    phase_ = Phase::kCollectAnswers;
    note("publishing", requester.name);
    return true;
  }

  /// nullopt stands for the empty submission.
  void answer(const PartyId& worker, std::optional<AnswerVector> a) {
    if (phase_ != Phase::kCollectAnswers) return;
    for (const auto& [w, _] : answers_) {
      if (w == worker) return;
    }
    answers_.emplace_back(worker, std::move(a));
    note("answering", worker.name);
    if (answers_.size() == task_.k) phase_ = Phase::kEvaluate;
  }

  const std::vector<std::pair<PartyId, std::optional<AnswerVector>>>& answers() const {
    return answers_;
  }

  void evaluate(const PartyId& from, const PartyId& worker) { request(from, worker, 0); }
  void outrange(const PartyId& from, const PartyId& worker, std::uint32_t index) {
    request(from, worker, index);
  }

  /// Delayed executions of the evaluation phase, then residual refund.
  std::vector<Decision> finish() {
    if (phase_ != Phase::kEvaluate) return {};
    const Coins share = task_.budget / task_.k;
    std::vector<Decision> out;
    for (const auto& [w, a] : answers_) {
      Decision d{w, false, "unrevealed"};
      auto it = requests_.find(w);
      if (!a) {
        // Empty submission is never paid.
      } else if (it == requests_.end()) {
        d = {w, true, "paid-default"};
      } else if (it->second == 0) {
        std::size_t q = 0;
        for (std::size_t j = 0; j < task_.goldens.size(); ++j) {
          q += (*a)[task_.goldens.indices[j] - 1] == task_.goldens.solutions[j];
        }
        d = q >= task_.threshold ? Decision{w, true, "paid-qualified"}
                                 : Decision{w, false, "withheld-low-quality"};
      } else {
        const auto i = it->second;
        const bool outside = i <= a->size() && !task_.range.contains((*a)[i - 1]);
        d = outside ? Decision{w, false, "withheld-outrange"} : Decision{w, true, "paid-bad-outrange"};
      }
      if (d.paid) ledger_->pay(self_, w, share);
      out.push_back(d);
    }
    if (const auto rest = ledger_->escrow(self_); rest > 0) ledger_->refund(self_, *requester_, rest);
    phase_ = Phase::kClosed;
    note("closed", {});
    return out;
  }

  Phase phase() const { return phase_; }

 private:
  void request(const PartyId& from, const PartyId& worker, std::uint32_t index) {
    if (phase_ != Phase::kEvaluate || from != *requester_) return;
    requests_.emplace(worker, index);  // first request per worker stands
  }

  void note(std::string kind, std::string party) {
    if (log_) log_->append({0, self_.name, std::move(kind), std::move(party), std::nullopt, {}});
  }

  PartyId self_;
  Ledger* ledger_;
  AuditLog* log_;
  Phase phase_ = Phase::kIdle;
  std::optional<PartyId> requester_;
  TaskSpec task_;
  std::vector<std::pair<PartyId, std::optional<AnswerVector>>> answers_;
  std::map<PartyId, std::uint32_t> requests_;  // 0 = evaluate, else outrange index
};

}  // namespace dragoon::sim
