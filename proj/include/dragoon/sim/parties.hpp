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

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dragoon/clients.hpp"
#include "dragoon/sim/scenario.hpp"

namespace dragoon::sim {

template <PrimeOrderGroup G>
using Outbox = std::vector<Message<G>>;

/// Stream for one party, independent of how many other parties exist.
inline Rng party_rng(std::uint64_t seed, std::string_view label) {
  ByteWriter w;
  w.field(as_bytes("dragoon.party")).u64(seed).field(as_bytes(label));
  return Rng(hash(w.bytes()));
}

/// An actor attached to the simulated network.
///
/// start() runs once at clock 0. on_event() sees every contract broadcast.
/// on_rush() runs for corrupt parties only, after all honest traffic of the
/// period has been sent, with the full set of undelivered messages.
template <PrimeOrderGroup G>
class Party {
 public:
  Party(PartyId id, Rng rng) : id_(std::move(id)), rng_(std::move(rng)) {}
  virtual ~Party() = default;

  const PartyId& id() const { return id_; }
  virtual bool corrupt() const { return false; }
  virtual void start(Outbox<G>&) {}
  virtual void on_event(const ContractEvent<G>&, Outbox<G>&) {}
  virtual void on_rush(const std::vector<Envelope<G>>&, Outbox<G>&) {}

 protected:
  PartyId id_;
  Rng rng_;
};

template <PrimeOrderGroup G>
class HonestRequesterParty : public Party<G> {
 public:
  HonestRequesterParty(Requester<G> r, TaskSpec task, Rng rng)
      : Party<G>(r.id(), std::move(rng)), requester_(std::move(r)), task_(std::move(task)) {}

  void start(Outbox<G>& out) override { out.push_back(requester_.publish(task_, this->rng_)); }

  void on_event(const ContractEvent<G>& ev, Outbox<G>& out) override {
    if (const auto* r = std::get_if<RevealedEvent<G>>(&ev)) {
      for (auto& m : requester_.evaluate(*r, this->rng_)) out.push_back(std::move(m));
    }
  }

  const Requester<G>& requester() const { return requester_; }

 protected:
  Requester<G> requester_;
  TaskSpec task_;
};

/// Publishes honestly, then misbehaves in the evaluation phase.
template <PrimeOrderGroup G>
class CorruptRequesterParty : public HonestRequesterParty<G> {
 public:
  CorruptRequesterParty(std::string strategy, Requester<G> r, TaskSpec task, Rng rng)
      : HonestRequesterParty<G>(std::move(r), std::move(task), std::move(rng)),
        strategy_(std::move(strategy)),
        table_(this->task_.range) {}

  bool corrupt() const override { return true; }

  void on_event(const ContractEvent<G>& ev, Outbox<G>& out) override {
    const auto* r = std::get_if<RevealedEvent<G>>(&ev);
    if (!r) return;
    const auto& profile = *this->requester_.profile();
    const GoldenMsg golden{profile.goldens, profile.golden_key};
    if (strategy_ == "withhold-golden") return;
    if (strategy_ == "silent-evaluate") {
      out.push_back(golden);
      return;
    }
    if (strategy_ == "bad-golden-key") {
      auto msgs = this->requester_.evaluate(*r, this->rng_);
      auto& g = std::get<GoldenMsg>(msgs.front());
      g.key.bytes[0] ^= 1;
      for (auto& m : msgs) out.push_back(std::move(m));
      return;
    }
    out.push_back(golden);
    for (const auto& [worker, answer] : r->answers) {
      if (!answer) continue;
      if (strategy_ == "false-reject") {
        out.push_back(false_reject(worker, *answer));
      } else if (strategy_ == "false-outrange") {
        out.push_back(false_outrange(worker, *answer));
      }
    }
  }

 private:
  const typename G::Scalar& secret() const { return this->requester_.keypair().secret; }

  // Claims one less than the threshold. Cycles between an honest wrong-set
  // disclosure, a disclosure that lies about a correct golden, and padding
  // with a duplicated item.
  EvaluateMsg<G> false_reject(const PartyId& worker, const EncryptedAnswer<G>& c) {
    const auto& gs = this->task_.goldens;
    auto claim = prove_quality(secret(), c, gs, table_, this->rng_);
    const auto chi = static_cast<std::int64_t>(this->task_.threshold) - 1;
    switch (variant_++ % 3) {
      case 0:
        break;
      case 1:
        for (std::size_t j = 0; j < gs.size(); ++j) {
          const auto idx = gs.indices[j];
          auto dec = decrypt(secret(), c.items[idx - 1], table_);
          if (!dec.is_in_range() || dec.plaintext() != gs.solutions[j]) continue;
          auto lie = prove_decryption(secret(), c.items[idx - 1], table_, this->rng_);
          const auto other = gs.solutions[j] == this->task_.range.low() ? this->task_.range.high()
                                                                        : this->task_.range.low();
          claim.proof.items.push_back({idx, DecResult<G>::in_range(other), lie.proof});
          break;
        }
        break;
      case 2:
        if (!claim.proof.items.empty()) claim.proof.items.push_back(claim.proof.items.front());
        break;
    }
    return {worker, chi, std::move(claim.proof)};
  }

  // Discloses question 1 as out of range whatever its content.
  OutrangeMsg<G> false_outrange(const PartyId& worker, const EncryptedAnswer<G>& c) {
    auto claim = prove_decryption(secret(), c.items[0], table_, this->rng_);
    auto disclosed = claim.result.is_in_range()
                         ? DecResult<G>::out_of_range(G::exp_base(G::scalar(claim.result.plaintext())))
                         : claim.result;
    return {worker, 1, disclosed, claim.proof};
  }

  std::string strategy_;
  DecryptionTable<G> table_;
  std::size_t variant_ = 0;
};

template <PrimeOrderGroup G>
class HonestWorkerParty : public Party<G> {
 public:
  HonestWorkerParty(Worker<G> w, Rng rng) : Party<G>(w.id(), std::move(rng)), worker_(std::move(w)) {}

  void on_event(const ContractEvent<G>& ev, Outbox<G>& out) override {
    if (const auto* p = std::get_if<PublishedEvent<G>>(&ev)) {
      if (auto m = worker_.on_published(*p, this->rng_)) out.push_back(*m);
    } else if (const auto* c = std::get_if<CommittedEvent>(&ev)) {
      if (auto m = worker_.on_committed(*c)) out.push_back(*m);
    }
  }

 protected:
  Worker<G> worker_;
};

template <PrimeOrderGroup G>
class CorruptWorkerParty : public HonestWorkerParty<G> {
 public:
  CorruptWorkerParty(std::string strategy, PartyId target, Worker<G> w, Rng rng)
      : HonestWorkerParty<G>(std::move(w), std::move(rng)),
        strategy_(std::move(strategy)),
        target_(std::move(target)) {}

  bool corrupt() const override { return true; }

  void on_event(const ContractEvent<G>& ev, Outbox<G>& out) override {
    if (strategy_ == "silent" || strategy_ == "copy-commit") {
      if (const auto* c = std::get_if<CommittedEvent>(&ev)) accepted_ = c->contains(this->id_);
      return;
    }
    if (const auto* c = std::get_if<CommittedEvent>(&ev)) {
      accepted_ = c->contains(this->id_);
      if (strategy_ == "no-reveal" || strategy_ == "replay-reveal") return;
      auto m = this->worker_.on_committed(*c);
      if (m && strategy_ == "bad-reveal") m->key.bytes[0] ^= 1;
      if (m) out.push_back(*m);
      return;
    }
    HonestWorkerParty<G>::on_event(ev, out);
  }

  // Copies whatever the victim has in flight: its commitment before the
  // cutoff, its opening afterwards.
  void on_rush(const std::vector<Envelope<G>>& in_flight, Outbox<G>& out) override {
    if (strategy_ != "copy-commit" && strategy_ != "replay-reveal") return;
    for (const auto& env : in_flight) {
      if (env.sender != target_) continue;
      if (const auto* c = std::get_if<CommitMsg>(&env.body);
          c && strategy_ == "copy-commit" && !copied_commit_) {
        copied_commit_ = true;
        out.push_back(*c);
      } else if (const auto* r = std::get_if<RevealMsg<G>>(&env.body); r && accepted_ && !replayed_) {
        replayed_ = true;
        out.push_back(*r);
      }
    }
  }

 private:
  std::string strategy_;
  PartyId target_;
  bool accepted_ = false;
  bool copied_commit_ = false;
  bool replayed_ = false;
};

/// What differs between the real run and the simulator's internal
/// emulation: substitute answers for honest workers and goldens for an
/// honest requester.
struct PartyOverrides {
  std::map<PartyId, AnswerVector> answers;
  std::optional<GoldenSet> goldens;
  std::string key_label;  // non-empty: derive the requester key from this label instead
};

template <PrimeOrderGroup G>
KeyPair<G> requester_keypair(const Scenario& sc, const std::string& label = {}) {
  if (!label.empty()) {
    auto rng = party_rng(sc.seed, "key:" + label);
    return KeyPair<G>::generate(rng);
  }
  if (!sc.requester.secret_key_hex.empty()) {
    const auto b = *from_hex(sc.requester.secret_key_hex);
    const auto k = G::decode_scalar(b);
    if (!k) throw ScenarioError("secret_key is not a canonical scalar");
    return {*k, G::exp_base(*k)};
  }
  auto rng = party_rng(sc.seed, "key:" + sc.requester.id.name);
  return KeyPair<G>::generate(rng);
}

/// Requester first, then workers in scenario order.
template <PrimeOrderGroup G>
std::vector<std::unique_ptr<Party<G>>> make_parties(const Scenario& sc,
                                                    const PartyOverrides& ov = {}) {
  std::vector<std::unique_ptr<Party<G>>> out;
  TaskSpec task = sc.task;
  if (ov.goldens) task.goldens = *ov.goldens;
  Requester<G> req(sc.requester.id, requester_keypair<G>(sc, ov.key_label));
  auto rrng = party_rng(sc.seed, sc.requester.id.name);
  if (sc.requester.honest()) {
    out.push_back(std::make_unique<HonestRequesterParty<G>>(std::move(req), task, std::move(rrng)));
  } else {
    out.push_back(std::make_unique<CorruptRequesterParty<G>>(sc.requester.strategy, std::move(req),
                                                             task, std::move(rrng)));
  }
  for (const auto& w : sc.workers) {
    auto answers = w.answers;
    if (auto it = ov.answers.find(w.id); it != ov.answers.end()) answers = it->second;
    auto rng = party_rng(sc.seed, w.id.name);
    if (w.honest()) {
      out.push_back(std::make_unique<HonestWorkerParty<G>>(Worker<G>(w.id, answers), std::move(rng)));
    } else {
      out.push_back(std::make_unique<CorruptWorkerParty<G>>(
          w.strategy, PartyId{w.target}, Worker<G>(w.id, answers, false), std::move(rng)));
    }
  }
  return out;
}

}  // namespace dragoon::sim
