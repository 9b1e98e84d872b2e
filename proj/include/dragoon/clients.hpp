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

#include <optional>
#include <stdexcept>
#include <vector>

#include "dragoon/contract.hpp"

namespace dragoon {

/// Everything a requester decides before publishing.
struct TaskSpec {
  std::uint32_t n = 1;
  Coins budget = 0;
  std::uint32_t k = 1;
  AnswerRange range{0, 1};
  std::uint32_t threshold = 0;
  GoldenSet goldens;
};

template <PrimeOrderGroup G>
struct RequesterProfile {
  KeyPair<G> keypair;
  GoldenSet goldens;
  CommitKey golden_key;
  TaskParams<G> params;
};

/// Honest requester. One key pair may serve any number of tasks.
template <PrimeOrderGroup G>
class Requester {
 public:
  Requester(PartyId id, KeyPair<G> keypair) : id_(std::move(id)), keypair_(std::move(keypair)) {}

  const PartyId& id() const { return id_; }
  const KeyPair<G>& keypair() const { return keypair_; }
  const std::optional<RequesterProfile<G>>& profile() const { return profile_; }

  /// Throws std::invalid_argument if the goldens do not fit the task.
  PublishMsg<G> publish(const TaskSpec& spec, Rng& rng) {
    if (auto err = spec.goldens.validate(spec.n, spec.range); !err.empty()) {
      throw std::invalid_argument(err);
    }
    RequesterProfile<G> p{keypair_, spec.goldens, CommitKey::random(rng), {}};
    p.params.n = spec.n;
    p.params.budget = spec.budget;
    p.params.k = spec.k;
    p.params.range = spec.range;
    p.params.threshold = spec.threshold;
    p.params.h = keypair_.pub;
    p.params.comm_gs = commit(spec.goldens.encode(), p.golden_key);
    if (auto err = p.params.validate(); !err.empty()) throw std::invalid_argument(err);
    profile_ = std::move(p);
    table_.emplace(spec.range);
    decrypted_.clear();
    return {profile_->params};
  }

  /// Always opens the goldens; then, per revealed worker, proves the lowest
  /// out-of-range position if any, else proves quality when it is below
  /// the threshold. Qualified workers get no message and are paid.
  std::vector<Message<G>> evaluate(const RevealedEvent<G>& revealed, Rng& rng) {
    if (!profile_) throw std::logic_error("evaluate before publish");
    const auto& p = *profile_;
    std::vector<Message<G>> out;
    out.push_back(GoldenMsg{p.goldens, p.golden_key});
    for (const auto& [worker, answer] : revealed.answers) {
      if (!answer) continue;
      AnswerVector plain;
      std::optional<std::uint32_t> out_of_range;
      for (std::size_t i = 0; i < answer->size(); ++i) {
        auto r = decrypt(keypair_.secret, answer->items[i], *table_);
        if (!r.is_in_range()) {
          if (!out_of_range) out_of_range = static_cast<std::uint32_t>(i + 1);
          plain.push_back(0);
        } else {
          plain.push_back(r.plaintext());
        }
      }
      decrypted_.emplace_back(worker, out_of_range ? std::nullopt : std::optional(plain));
      if (out_of_range) {
        auto claim = prove_decryption(keypair_.secret, answer->items[*out_of_range - 1], *table_, rng);
        out.push_back(OutrangeMsg<G>{worker, *out_of_range, claim.result, claim.proof});
      } else if (quality(plain, p.goldens) < p.params.threshold) {
        auto claim = prove_quality(keypair_.secret, *answer, p.goldens, *table_, rng);
        out.push_back(EvaluateMsg<G>{worker, claim.chi, std::move(claim.proof)});
      }
    }
    return out;
  }

  /// Plaintexts recovered in the last evaluate(); nullopt for vectors with
  /// an out-of-range entry.
  const std::vector<std::pair<PartyId, std::optional<AnswerVector>>>& decrypted() const {
    return decrypted_;
  }

 private:
  PartyId id_;
  KeyPair<G> keypair_;
  std::optional<RequesterProfile<G>> profile_;
  std::optional<DecryptionTable<G>> table_;
  std::vector<std::pair<PartyId, std::optional<AnswerVector>>> decrypted_;
};

/// Worker following the commit-then-reveal protocol.
///
/// With validate off the worker submits its vector verbatim, which is how
/// the simulator models a worker sending out-of-range answers.
template <PrimeOrderGroup G>
class Worker {
 public:
  Worker(PartyId id, AnswerVector answers, bool validate = true)
      : id_(std::move(id)), answers_(std::move(answers)), validate_(validate) {}

  const PartyId& id() const { return id_; }
  const AnswerVector& answers() const { return answers_; }
  const std::optional<EncryptedAnswer<G>>& ciphertexts() const { return ciphertexts_; }
  const std::optional<CommitKey>& blind_key() const { return blind_key_; }
  const std::optional<Commitment>& commitment() const { return commitment_; }

  /// Throws std::invalid_argument on a vector the honest client refuses.
  std::optional<CommitMsg> on_published(const PublishedEvent<G>& ev, Rng& rng) {
    if (commitment_) return std::nullopt;
    const auto& params = ev.params;
    if (answers_.size() != params.n) throw std::invalid_argument("answer vector length != N");
    if (validate_) {
      for (auto a : answers_) {
        if (!params.range.contains(a)) throw std::invalid_argument("answer outside range");
      }
    }
    EncryptedAnswer<G> c;
    c.items.reserve(answers_.size());
    for (auto a : answers_) c.items.push_back(encrypt<G>(a, params.h, rng));
    blind_key_ = CommitKey::random(rng);
    commitment_ = commit(c.encode(), *blind_key_);
    ciphertexts_ = std::move(c);
    return CommitMsg{*commitment_};
  }

  /// Reveals only when accepted into the committed set.
  std::optional<RevealMsg<G>> on_committed(const CommittedEvent& ev) {
    if (revealed_ || !commitment_ || !ev.contains(id_)) return std::nullopt;
    revealed_ = true;
    return RevealMsg<G>{*ciphertexts_, *blind_key_};
  }

 private:
  PartyId id_;
  AnswerVector answers_;
  bool validate_;
  std::optional<EncryptedAnswer<G>> ciphertexts_;
  std::optional<CommitKey> blind_key_;
  std::optional<Commitment> commitment_;
  bool revealed_ = false;
};

}  // namespace dragoon
