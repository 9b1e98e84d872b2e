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

#include <set>
#include <stdexcept>
#include <vector>

#include "dragoon/contract.hpp"
#include "dragoon/sim/scheduler.hpp"

namespace dragoon::sim {

struct DeliveryRecord {
  std::uint64_t seq;
  std::uint64_t sent;
  std::uint64_t delivered;
};

/// Message pool between parties and the contract.
///
/// A message sent in period t is offered to the scheduler at boundary t+1.
/// The scheduler may hold it back once; at t+2 it must be delivered.
/// Scheduler output that drops, duplicates or over-delays is rejected.
template <PrimeOrderGroup G>
class Network {
 public:
  std::uint64_t send(const PartyId& from, Message<G> body, std::uint64_t clock) {
    const auto seq = next_seq_++;
    pending_.push_back({{from, clock, seq, std::move(body)}, false});
    return seq;
  }

  /// Undelivered messages, visible to a rushing adversary.
  std::vector<Envelope<G>> in_flight() const {
    std::vector<Envelope<G>> out;
    for (const auto& p : pending_) out.push_back(p.env);
    return out;
  }

  std::vector<Envelope<G>> deliver(std::uint64_t clock, Scheduler& scheduler) {
    std::vector<std::size_t> due;  // positions in pending_
    std::vector<PendingMeta> metas;
    for (std::size_t i = 0; i < pending_.size(); ++i) {
      const auto& p = pending_[i];
      if (p.env.sent >= clock) continue;
      due.push_back(i);
      metas.push_back({p.env.sender, std::string(message_kind<G>(p.env.body)), p.env.sent,
                       p.env.seq, !p.deferred});
    }
    auto s = scheduler.schedule(clock, metas);

    std::vector<int> seen(due.size(), 0);
    for (auto i : s.order) {
      if (i >= due.size()) throw std::logic_error("scheduler index out of range");
      ++seen[i];
    }
    for (auto i : s.deferred) {
      if (i >= due.size()) throw std::logic_error("scheduler index out of range");
      if (!metas[i].deferrable) throw std::logic_error("scheduler deferred a message twice");
      ++seen[i];
    }
    for (auto n : seen) {
      if (n != 1) throw std::logic_error("scheduler output is not a partition of the batch");
    }

    std::vector<Envelope<G>> out;
    std::set<std::size_t> delivered;
    for (auto i : s.order) {
      out.push_back(pending_[due[i]].env);
      history_.push_back({pending_[due[i]].env.seq, pending_[due[i]].env.sent, clock});
      delivered.insert(due[i]);
    }
    for (auto i : s.deferred) pending_[due[i]].deferred = true;

    std::vector<Pending> rest;
    for (std::size_t i = 0; i < pending_.size(); ++i) {
      if (!delivered.contains(i)) rest.push_back(std::move(pending_[i]));
    }
    pending_ = std::move(rest);
    return out;
  }

  const std::vector<DeliveryRecord>& history() const { return history_; }
  std::uint64_t sent_count() const { return next_seq_; }

 private:
  struct Pending {
    Envelope<G> env;
    bool deferred;
  };

  std::vector<Pending> pending_;
  std::vector<DeliveryRecord> history_;
  std::uint64_t next_seq_ = 0;
};

}  // namespace dragoon::sim
