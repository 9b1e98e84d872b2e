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
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dragoon/commitment.hpp"
#include "dragoon/ledger.hpp"
#include "dragoon/poqoea.hpp"

namespace dragoon {

template <PrimeOrderGroup G>
struct TaskParams {
  std::uint32_t n = 1;  // question count
  Coins budget = 0;
  std::uint32_t k = 1;  // worker quota
  AnswerRange range{0, 1};
  std::uint32_t threshold = 0;
  typename G::Element h = G::identity();
  Commitment comm_gs{};

  Coins payout() const { return budget / k; }

  /// Empty when the parameters are admissible.
  std::string validate() const {
    if (n < 1) return "N must be at least 1";
    if (k < 1) return "K must be at least 1";
    if (threshold > n) return "threshold exceeds N";
    if (budget % k != 0) return "budget not divisible by K";
    return {};
  }

  Bytes encode() const {
    ByteWriter w;
    w.u32(n).u64(budget).u32(k).u32(range.low()).u32(range.high()).u32(threshold);
    w.field(G::encode(h)).field(comm_gs.digest.bytes);
    return std::move(w).take();
  }
};

// Inbound contract messages. The sender is attached by the transport.

template <PrimeOrderGroup G>
struct PublishMsg {
  TaskParams<G> params;
};

struct CommitMsg {
  Commitment comm;
};

template <PrimeOrderGroup G>
struct RevealMsg {
  EncryptedAnswer<G> answer;
  CommitKey key;
};

struct GoldenMsg {
  GoldenSet goldens;
  CommitKey key;
};

template <PrimeOrderGroup G>
struct OutrangeMsg {
  PartyId worker;
  std::uint32_t index;  // 1-based
  DecResult<G> disclosed;
  DecryptionProof<G> proof;
};

template <PrimeOrderGroup G>
struct EvaluateMsg {
  PartyId worker;
  std::int64_t chi;
  QualityProof<G> proof;
};

template <PrimeOrderGroup G>
using Message = std::variant<PublishMsg<G>, CommitMsg, RevealMsg<G>, GoldenMsg, OutrangeMsg<G>,
                             EvaluateMsg<G>>;

template <PrimeOrderGroup G>
std::string_view message_kind(const Message<G>& m) {
  static constexpr std::string_view kNames[] = {"publish", "commit",   "reveal",
                                                "golden",  "outrange", "evaluate"};
  return kNames[m.index()];
}

template <PrimeOrderGroup G>
Bytes encode_message(const Message<G>& m) {
  ByteWriter w;
  w.u8(static_cast<std::uint8_t>(m.index()));
  std::visit(
      [&](const auto& body) {
        using T = std::decay_t<decltype(body)>;
        if constexpr (std::is_same_v<T, PublishMsg<G>>) {
          w.field(body.params.encode());
        } else if constexpr (std::is_same_v<T, CommitMsg>) {
          w.field(body.comm.digest.bytes);
        } else if constexpr (std::is_same_v<T, RevealMsg<G>>) {
          w.field(body.answer.encode()).field(body.key.bytes);
        } else if constexpr (std::is_same_v<T, GoldenMsg>) {
          w.field(body.goldens.encode()).field(body.key.bytes);
        } else if constexpr (std::is_same_v<T, OutrangeMsg<G>>) {
          w.field(as_bytes(body.worker.name)).u32(body.index);
          body.disclosed.write_to(w);
          w.field(body.proof.encode());
        } else {
          w.field(as_bytes(body.worker.name)).u64(static_cast<std::uint64_t>(body.chi));
          w.field(body.proof.encode());
        }
      },
      m);
  return std::move(w).take();
}

template <PrimeOrderGroup G>
struct Envelope {
  PartyId sender;
  std::uint64_t sent = 0;  // clock period the message was sent in
  std::uint64_t seq = 0;   // global send order, unique per run
  Message<G> body;
};

enum class Phase { kIdle, kCollectCommits, kCollectReveals, kEvaluate, kClosed };

inline std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::kIdle: return "idle";
    case Phase::kCollectCommits: return "collect-commits";
    case Phase::kCollectReveals: return "collect-reveals";
    case Phase::kEvaluate: return "evaluate";
    case Phase::kClosed: return "closed";
  }
  return "?";
}

enum class VerdictReason {
  kPaidDefault,         // golden opened, no rejection message
  kPaidQualified,       // evaluate claimed chi >= threshold
  kPaidBadEvaluate,     // evaluate proof failed verification
  kPaidBadOutrange,     // outrange disclosure in range or proof invalid
  kPaidNoGolden,        // goldens never opened
  kWithheldLowQuality,  // valid proof of quality below threshold
  kWithheldOutrange,    // valid proof of an out-of-range answer
  kUnrevealed,          // committed but no valid reveal
};

inline std::string_view to_string(VerdictReason r) {
  switch (r) {
    case VerdictReason::kPaidDefault: return "paid-default";
    case VerdictReason::kPaidQualified: return "paid-qualified";
    case VerdictReason::kPaidBadEvaluate: return "paid-bad-evaluate";
    case VerdictReason::kPaidBadOutrange: return "paid-bad-outrange";
    case VerdictReason::kPaidNoGolden: return "paid-no-golden";
    case VerdictReason::kWithheldLowQuality: return "withheld-low-quality";
    case VerdictReason::kWithheldOutrange: return "withheld-outrange";
    case VerdictReason::kUnrevealed: return "unrevealed";
  }
  return "?";
}

struct Verdict {
  PartyId worker;
  bool paid;
  VerdictReason reason;
};

// Broadcast events.

template <PrimeOrderGroup G>
struct PublishedEvent {
  PartyId requester;
  TaskParams<G> params;
};

struct CommittedEvent {
  std::vector<std::pair<PartyId, Commitment>> comms;  // acceptance order

  bool contains(const PartyId& w) const {
    for (const auto& [id, _] : comms) {
      if (id == w) return true;
    }
    return false;
  }
};

template <PrimeOrderGroup G>
struct RevealedEvent {
  std::vector<std::pair<PartyId, std::optional<EncryptedAnswer<G>>>> answers;
};

struct VerdictsEvent {
  bool golden_opened = false;
  std::vector<Verdict> verdicts;
  Coins refund = 0;
};

template <PrimeOrderGroup G>
using ContractEvent = std::variant<PublishedEvent<G>, CommittedEvent, RevealedEvent<G>, VerdictsEvent>;

template <PrimeOrderGroup G>
std::string_view event_kind(const ContractEvent<G>& e) {
  static constexpr std::string_view kNames[] = {"published", "committed", "revealed", "verdicts"};
  return kNames[e.index()];
}

template <PrimeOrderGroup G>
Bytes encode_event(const ContractEvent<G>& e) {
  ByteWriter w;
  w.u8(static_cast<std::uint8_t>(e.index()));
  std::visit(
      [&](const auto& ev) {
        using T = std::decay_t<decltype(ev)>;
        if constexpr (std::is_same_v<T, PublishedEvent<G>>) {
          w.field(as_bytes(ev.requester.name)).field(ev.params.encode());
        } else if constexpr (std::is_same_v<T, CommittedEvent>) {
          w.u32(static_cast<std::uint32_t>(ev.comms.size()));
          for (const auto& [id, c] : ev.comms) w.field(as_bytes(id.name)).field(c.digest.bytes);
        } else if constexpr (std::is_same_v<T, RevealedEvent<G>>) {
          w.u32(static_cast<std::uint32_t>(ev.answers.size()));
          for (const auto& [id, a] : ev.answers) {
            w.field(as_bytes(id.name));
            if (a) {
              w.u8(1).field(a->encode());
            } else {
              w.u8(0);
            }
          }
        } else {
          w.u8(ev.golden_opened).u64(ev.refund).u32(static_cast<std::uint32_t>(ev.verdicts.size()));
          for (const auto& v : ev.verdicts) {
            w.field(as_bytes(v.worker.name)).u8(v.paid).u8(static_cast<std::uint8_t>(v.reason));
          }
        }
      },
      e);
  return std::move(w).take();
}

inline std::string short_digest(ByteView payload) { return hash(payload).hex().substr(0, 16); }

/// The HIT contract as a clock-driven state machine over a Ledger.
///
/// Inbound messages arrive as one adversary-ordered batch per clock
/// boundary through step(). Commits are processed as they arrive; reveal
/// and evaluation messages are buffered and acted on when the phase's
/// deadline boundary (entry clock + window) is reached, so any message sent
/// in the entry period still counts under the one-period delivery delay.
template <PrimeOrderGroup G>
class HitContract {
 public:
  static constexpr std::uint64_t kDefaultWindow = 2;

  HitContract(PartyId self, Ledger& ledger, AuditLog* log = nullptr,
              std::uint64_t window = kDefaultWindow)
      : self_(std::move(self)), ledger_(&ledger), log_(log), window_(window) {}

  const PartyId& id() const { return self_; }
  Phase phase() const { return phase_; }
  const std::vector<Phase>& phase_history() const { return history_; }
  const std::optional<TaskParams<G>>& params() const { return params_; }
  const std::optional<PartyId>& requester() const { return requester_; }
  const std::vector<std::pair<PartyId, Commitment>>& comms() const { return comms_; }
  const std::vector<std::pair<PartyId, std::optional<EncryptedAnswer<G>>>>& answers() const {
    return answers_;
  }
  const std::vector<Verdict>& verdicts() const { return verdicts_; }
  const std::optional<GoldenSet>& golden_opened() const { return golden_opened_; }

  /// Delivers one boundary's batch in the given order, then fires any
  /// deadline that falls on this boundary.
  std::vector<ContractEvent<G>> step(std::uint64_t clock, const std::vector<Envelope<G>>& batch) {
    clock_ = clock;
    ledger_->set_clock(clock);
    std::vector<ContractEvent<G>> events;
    const Phase at_start = phase_;
    std::vector<Envelope<G>> commits;
    for (const auto& env : batch) {
      switch (at_start) {
        case Phase::kIdle:
          if (auto* p = std::get_if<PublishMsg<G>>(&env.body); p && phase_ == Phase::kIdle) {
            append(events, on_publish(*p, env.sender));
          } else {
            note("ignored-" + std::string(message_kind<G>(env.body)), env.sender.name);
          }
          break;
        case Phase::kCollectCommits:
          if (std::holds_alternative<CommitMsg>(env.body)) {
            commits.push_back(env);
          } else {
            note("ignored-" + std::string(message_kind<G>(env.body)), env.sender.name);
          }
          break;
        case Phase::kCollectReveals:
        case Phase::kEvaluate:
          buffer_.push_back(env);
          break;
        case Phase::kClosed:
          note("ignored-" + std::string(message_kind<G>(env.body)), env.sender.name);
          break;
      }
    }
    if (!commits.empty()) append(events, on_commit_batch(commits));

    if (phase_ == at_start && clock == deadline_) {
      auto pending = std::move(buffer_);
      buffer_.clear();
      if (phase_ == Phase::kCollectReveals) {
        append(events, on_reveal_deadline(pending));
      } else if (phase_ == Phase::kEvaluate) {
        append(events, on_evaluate_deadline(pending));
      }
    }
    return events;
  }

  std::optional<ContractEvent<G>> on_publish(const PublishMsg<G>& msg, const PartyId& from) {
    if (phase_ != Phase::kIdle) {
      note("ignored-publish", from.name);
      return std::nullopt;
    }
    if (!msg.params.validate().empty()) {
      note("publish-rejected", from.name);
      return std::nullopt;
    }
    if (ledger_->freeze(from, self_, msg.params.budget) != FreezeOutcome::kFrozen) {
      return std::nullopt;
    }
    params_ = msg.params;
    requester_ = from;
    table_.emplace(msg.params.range);
    enter(Phase::kCollectCommits);
    return broadcast(PublishedEvent<G>{from, msg.params});
  }

  /// Processes commits in the order given. A commit is accepted only if its
  /// sender has none yet and its value is not already taken.
  std::optional<ContractEvent<G>> on_commit_batch(const std::vector<Envelope<G>>& msgs) {
    for (const auto& env : msgs) {
      const auto* c = std::get_if<CommitMsg>(&env.body);
      if (!c) continue;
      if (phase_ != Phase::kCollectCommits) {
        note("commit-excess", env.sender.name);
        continue;
      }
      bool duplicate = false;
      for (const auto& [w, comm] : comms_) {
        if (w == env.sender || comm == c->comm) duplicate = true;
      }
      if (duplicate) {
        note("commit-dropped", env.sender.name);
        continue;
      }
      comms_.emplace_back(env.sender, c->comm);
      note("commit-accepted", env.sender.name);
      if (comms_.size() == params_->k) {
        enter(Phase::kCollectReveals);
        return broadcast(CommittedEvent{comms_});
      }
    }
    return std::nullopt;
  }

  std::optional<ContractEvent<G>> on_reveal_deadline(const std::vector<Envelope<G>>& msgs) {
    if (phase_ != Phase::kCollectReveals) return std::nullopt;
    answers_.clear();
    for (const auto& [worker, comm] : comms_) {
      std::optional<EncryptedAnswer<G>> recorded;
      for (const auto& env : msgs) {
        const auto* r = std::get_if<RevealMsg<G>>(&env.body);
        if (!r || env.sender != worker) continue;
        // Wrong-length vectors could never be evaluated, so they count as
        // no submission.
        if (r->answer.size() == params_->n && open(comm, r->answer.encode(), r->key)) {
          recorded = r->answer;
          break;
        }
      }
      note(recorded ? "reveal-accepted" : "reveal-missing", worker.name);
      answers_.emplace_back(worker, std::move(recorded));
    }
    enter(Phase::kEvaluate);
    return broadcast(RevealedEvent<G>{answers_});
  }

  std::optional<ContractEvent<G>> on_evaluate_deadline(const std::vector<Envelope<G>>& msgs) {
    if (phase_ != Phase::kEvaluate) return std::nullopt;
    const auto& p = *params_;

    for (const auto& env : msgs) {
      const auto* g = std::get_if<GoldenMsg>(&env.body);
      if (!g || env.sender != *requester_) continue;
      if (open(p.comm_gs, g->goldens.encode(), g->key) &&
          g->goldens.validate(p.n, p.range).empty()) {
        golden_opened_ = g->goldens;
        break;
      }
    }

    verdicts_.clear();
    for (const auto& [worker, answer] : answers_) {
      verdicts_.push_back({worker, false, VerdictReason::kUnrevealed});
      auto& v = verdicts_.back();
      if (!golden_opened_) {
        v.paid = true;
        v.reason = VerdictReason::kPaidNoGolden;
        continue;
      }
      if (!answer) continue;
      v.paid = true;
      v.reason = VerdictReason::kPaidDefault;
      if (const auto* msg = first_rejection(msgs, worker)) {
        if (const auto* o = std::get_if<OutrangeMsg<G>>(msg)) {
          const bool withheld =
              !o->disclosed.is_in_range() &&
              verify_decryption(p.h, o->disclosed, answer->items[o->index - 1], o->proof, *table_);
          v.paid = !withheld;
          v.reason = withheld ? VerdictReason::kWithheldOutrange : VerdictReason::kPaidBadOutrange;
        } else if (const auto* e = std::get_if<EvaluateMsg<G>>(msg)) {
          if (e->chi >= static_cast<std::int64_t>(p.threshold)) {
            v.reason = VerdictReason::kPaidQualified;
          } else if (verify_quality(p.h, *answer, e->chi, e->proof, *golden_opened_, *table_)) {
            v.paid = false;
            v.reason = VerdictReason::kWithheldLowQuality;
          } else {
            v.reason = VerdictReason::kPaidBadEvaluate;
          }
        }
      }
    }

    for (const auto& v : verdicts_) {
      if (v.paid) ledger_->pay(self_, v.worker, p.payout());
    }
    const Coins refund = ledger_->escrow(self_);
    if (refund > 0) ledger_->refund(self_, *requester_, refund);
    enter(Phase::kClosed);
    return broadcast(VerdictsEvent{golden_opened_.has_value(), verdicts_, refund});
  }

 private:
  /// First well-formed outrange/evaluate message about a worker, from the
  /// requester, in delivery order.
  const Message<G>* first_rejection(const std::vector<Envelope<G>>& msgs, const PartyId& worker) {
    for (const auto& env : msgs) {
      if (env.sender != *requester_) continue;
      if (const auto* o = std::get_if<OutrangeMsg<G>>(&env.body)) {
        if (o->worker == worker && o->index >= 1 && o->index <= params_->n) return &env.body;
      } else if (const auto* e = std::get_if<EvaluateMsg<G>>(&env.body)) {
        if (e->worker == worker) return &env.body;
      }
    }
    return nullptr;
  }

  void enter(Phase next) {
    phase_ = next;
    history_.push_back(next);
    deadline_ = (next == Phase::kCollectReveals || next == Phase::kEvaluate)
                    ? std::optional<std::uint64_t>(clock_ + window_)
                    : std::nullopt;
    note("phase-" + std::string(to_string(next)), {});
  }

  ContractEvent<G> broadcast(ContractEvent<G> e) {
    if (log_) {
      log_->append({clock_, self_.name, std::string(event_kind<G>(e)), {}, std::nullopt,
                    short_digest(encode_event<G>(e))});
    }
    return e;
  }

  void note(std::string kind, std::string party) {
    if (log_) log_->append({clock_, self_.name, std::move(kind), std::move(party), std::nullopt, {}});
  }

  static void append(std::vector<ContractEvent<G>>& out, std::optional<ContractEvent<G>> e) {
    if (e) out.push_back(std::move(*e));
  }

  PartyId self_;
  Ledger* ledger_;
  AuditLog* log_;
  std::uint64_t window_;
  std::uint64_t clock_ = 0;
  std::optional<std::uint64_t> deadline_;
  Phase phase_ = Phase::kIdle;
  std::vector<Phase> history_{Phase::kIdle};
  std::optional<TaskParams<G>> params_;
  std::optional<PartyId> requester_;
  std::optional<DecryptionTable<G>> table_;
  std::vector<std::pair<PartyId, Commitment>> comms_;
  std::vector<std::pair<PartyId, std::optional<EncryptedAnswer<G>>>> answers_;
  std::vector<Envelope<G>> buffer_;
  std::optional<GoldenSet> golden_opened_;
  std::vector<Verdict> verdicts_;
};

}  // namespace dragoon
