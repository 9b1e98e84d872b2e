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

#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dragoon/contract.hpp"
#include "dragoon/ristretto255.hpp"
#include "dragoon/sim/ideal_hit.hpp"
#include "dragoon/sim/network.hpp"
#include "dragoon/sim/parties.hpp"

namespace dragoon::sim {

inline const PartyId kContractId{"contract"};

struct WorkerVerdict {
  PartyId worker;
  bool paid;
  std::string reason;
};

struct RunOutcome {
  std::string world;
  PartyId requester;
  std::map<PartyId, Coins> balances;  // every scenario party
  std::vector<WorkerVerdict> verdicts;
  std::vector<PartyId> entrants;  // the K accepted workers, in order
  std::set<PartyId> bottom;       // entrants with no valid submission
  std::set<PartyId> honest;
  bool closed = false;
  bool timed_out = false;
  bool golden_opened = false;
  std::uint64_t end_clock = 0;
  AuditLog log;
  std::map<std::string, std::size_t> message_counts;
  std::map<std::string, std::size_t> message_bytes;
  Bytes pre_golden_transcript;  // everything a worker could see before goldens were sent
  std::string diagnostic;

  bool ok() const { return closed && !timed_out; }

  Coins balance(const PartyId& p) const {
    auto it = balances.find(p);
    return it == balances.end() ? 0 : it->second;
  }
};

/// Protocol execution plus the state a simulator needs to read back.
template <PrimeOrderGroup G>
struct Execution {
  RunOutcome outcome;
  std::vector<std::pair<PartyId, std::optional<EncryptedAnswer<G>>>> revealed;
  KeyPair<G> requester_key;
};

namespace detail {

template <PrimeOrderGroup G>
Execution<G> execute(const Scenario& sc, const PartyOverrides& ov, std::string world) {
  Execution<G> ex{{}, {}, requester_keypair<G>(sc, ov.key_label)};
  auto& out = ex.outcome;
  out.world = std::move(world);
  out.requester = sc.requester.id;
  out.honest = sc.honest_parties();

  Ledger ledger;
  ledger.attach(&out.log);
  ledger.deposit(sc.requester.id, sc.requester.balance);
  for (const auto& w : sc.workers) ledger.deposit(w.id, w.balance);
  HitContract<G> contract(kContractId, ledger, &out.log);
  auto parties = make_parties<G>(sc, ov);
  Network<G> net;
  auto scheduler = make_scheduler(sc.scheduler);
  bool golden_sent = false;

  auto record = [&](ByteView b) {
    if (!golden_sent) out.pre_golden_transcript.insert(out.pre_golden_transcript.end(), b.begin(), b.end());
  };
  auto flush = [&](const Party<G>& p, Outbox<G>& box, std::uint64_t clock) {
    for (auto& m : box) {
      const std::string kind(message_kind<G>(m));
      const auto bytes = encode_message<G>(m);
      if (std::holds_alternative<GoldenMsg>(m)) golden_sent = true;
      record(bytes);
      ++out.message_counts[kind];
      out.message_bytes[kind] += bytes.size();
      out.log.append({clock, p.id().name, "send-" + kind, {}, std::nullopt, short_digest(bytes)});
      net.send(p.id(), std::move(m), clock);
    }
    box.clear();
  };
  // Honest parties act first; corrupt ones then rush with full visibility
  // of the period's traffic.
  auto react = [&](const std::vector<ContractEvent<G>>& events, std::uint64_t clock, bool start) {
    Outbox<G> box;
    for (bool corrupt : {false, true}) {
      for (auto& p : parties) {
        if (p->corrupt() != corrupt) continue;
        if (start) p->start(box);
        for (const auto& ev : events) p->on_event(ev, box);
        flush(*p, box, clock);
      }
    }
    for (auto& p : parties) {
      if (!p->corrupt()) continue;
      p->on_rush(net.in_flight(), box);
      flush(*p, box, clock);
    }
  };

  react({}, 0, true);
  std::uint64_t clock = 0;
  while (contract.phase() != Phase::kClosed && clock < sc.timeout) {
    ++clock;
    auto batch = net.deliver(clock, *scheduler);
    for (const auto& env : batch) {
      out.log.append({clock, "network", "deliver-" + std::string(message_kind<G>(env.body)),
                      env.sender.name, std::nullopt, short_digest(encode_message<G>(env.body))});
    }
    auto events = contract.step(clock, batch);
    for (const auto& ev : events) record(encode_event<G>(ev));
    react(events, clock, false);
  }
  out.end_clock = clock;

  for (const auto& [kind, n] : out.message_counts) {
    out.log.append({clock, "network", "count-" + kind, {}, n, {}});
    out.log.append({clock, "network", "bytes-" + kind, {}, out.message_bytes[kind], {}});
  }

  out.balances[sc.requester.id] = ledger.balance(sc.requester.id);
  for (const auto& w : sc.workers) out.balances[w.id] = ledger.balance(w.id);
  for (const auto& [w, _] : contract.comms()) out.entrants.push_back(w);
  ex.revealed = contract.answers();
  for (const auto& [w, a] : ex.revealed) {
    if (!a) out.bottom.insert(w);
  }
  for (const auto& v : contract.verdicts()) {
    out.verdicts.push_back({v.worker, v.paid, std::string(to_string(v.reason))});
  }
  out.golden_opened = contract.golden_opened().has_value();
  out.closed = contract.phase() == Phase::kClosed;
  if (!out.closed) {
    out.timed_out = true;
    out.diagnostic = out.world + ": timeout after " + std::to_string(clock) + " periods in phase " +
                     std::string(to_string(contract.phase()));
  }
  return ex;
}

}  // namespace detail

/// Drives contract, clients and ledger until Closed or timeout.
template <PrimeOrderGroup G = Ristretto255>
RunOutcome run_real(const Scenario& sc) {
  if (auto err = sc.validate(); !err.empty()) throw ScenarioError(err);
  return detail::execute<G>(sc, {}, "real").outcome;
}

/// The ideal world with a simulator.
///
/// The simulator runs the real protocol internally against the adversary,
/// playing the honest parties with what the ideal functionality would let
/// it know: when the requester is honest, honest workers' answers and the
/// goldens are replaced by dummies and the requester key is its own. From
/// that emulation it extracts which workers got in, what each corrupt
/// entrant submitted, and which rejections a corrupt requester made good
/// on; these become the ideal-world inputs. Honest parties talk to the
/// functionality directly with their true inputs.
template <PrimeOrderGroup G = Ristretto255>
RunOutcome run_ideal(const Scenario& sc) {
  if (auto err = sc.validate(); !err.empty()) throw ScenarioError(err);
  const auto& task = sc.task;
  const bool requester_honest = sc.requester.honest();

  PartyOverrides ov;
  if (requester_honest) {
    for (const auto& w : sc.workers) {
      if (w.honest()) ov.answers[w.id] = AnswerVector(task.n, task.range.low());
    }
    GoldenSet dummy;
    for (std::uint32_t i = 1; i <= task.goldens.size(); ++i) {
      dummy.indices.push_back(i);
      dummy.solutions.push_back(task.range.low());
    }
    ov.goldens = dummy;
    ov.key_label = "simulator";
  }
  auto emu = detail::execute<G>(sc, ov, "ideal");
  RunOutcome out;
  out.world = "ideal";
  out.requester = sc.requester.id;
  out.honest = sc.honest_parties();
  out.end_clock = emu.outcome.end_clock;
  out.message_counts = emu.outcome.message_counts;
  out.message_bytes = emu.outcome.message_bytes;
  out.entrants = emu.outcome.entrants;

  Ledger ledger;
  ledger.attach(&out.log);
  ledger.deposit(sc.requester.id, sc.requester.balance);
  for (const auto& w : sc.workers) ledger.deposit(w.id, w.balance);
  IdealHit f(kContractId, ledger, &out.log);
  auto finish_balances = [&] {
    out.balances[sc.requester.id] = ledger.balance(sc.requester.id);
    for (const auto& w : sc.workers) out.balances[w.id] = ledger.balance(w.id);
  };

  if (emu.outcome.timed_out) {
    out.timed_out = true;
    out.diagnostic = emu.outcome.diagnostic;
    finish_balances();
    return out;
  }

  f.publish(sc.requester.id, task);
  const DecryptionTable<G> table(task.range);
  const Plaintext outside =
      task.range.high() < std::numeric_limits<Plaintext>::max() ? task.range.high() + 1 : task.range.low() - 1;
  for (const auto& [w, c] : emu.revealed) {
    std::optional<AnswerVector> a;
    const auto* spec = sc.worker(w);
    if (!c) {
      out.bottom.insert(w);
    } else if (spec->honest()) {
      a = spec->answers;
    } else {
      AnswerVector plain;
      for (const auto& ct : c->items) {
        auto d = decrypt(emu.requester_key.secret, ct, table);
        plain.push_back(d.is_in_range() ? d.plaintext() : outside);
      }
      a = std::move(plain);
    }
    f.answer(w, std::move(a));
  }

  auto lowest_outside = [&](const AnswerVector& a) -> std::optional<std::uint32_t> {
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!task.range.contains(a[i])) return static_cast<std::uint32_t>(i + 1);
    }
    return std::nullopt;
  };

  if (requester_honest) {
    for (const auto& [w, a] : f.answers()) {
      if (!a) continue;
      if (auto i = lowest_outside(*a)) {
        f.outrange(sc.requester.id, w, *i);
      } else if (quality(*a, task.goldens) < task.threshold) {
        f.evaluate(sc.requester.id, w);
      }
    }
  } else if (emu.outcome.golden_opened) {
    for (const auto& v : emu.outcome.verdicts) {
      if (v.reason == to_string(VerdictReason::kWithheldLowQuality)) {
        f.evaluate(sc.requester.id, v.worker);
      } else if (v.reason == to_string(VerdictReason::kWithheldOutrange)) {
        for (const auto& [w, a] : f.answers()) {
          if (w == v.worker && a) f.outrange(sc.requester.id, w, lowest_outside(*a).value_or(1));
        }
      }
    }
  }

  ledger.set_clock(out.end_clock);
  for (const auto& d : f.finish()) out.verdicts.push_back({d.worker, d.paid, d.reason});
  out.closed = f.phase() == IdealHit::Phase::kClosed;
  if (!out.closed) {
    out.timed_out = true;
    out.diagnostic = "ideal: functionality did not reach evaluation";
  }
  finish_balances();
  return out;
}

}  // namespace dragoon::sim
