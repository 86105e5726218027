#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fraudml/hmm.hpp"

namespace fraudml::seq {

struct Transaction {
  std::uint64_t tx_id = 0;
  std::int64_t timestamp = 0;  // epoch seconds, UTC
  std::string card_id;
  std::string terminal_id;
  double amount = 0.0;
  std::string country;
  std::string card_type;
  bool is_fraud = false;
};

enum class ActorKind { kCardHolder, kTerminal };
enum class SignalKind { kAmount, kTimeDelta };
enum class HistoryLabel { kGenuine, kCompromised };

// One of the eight (actor x history-label x signal) model slots.
// Canonical order: the four card-holder combinations (genuine/amount,
// genuine/timedelta, compromised/amount, compromised/timedelta) followed by
// the four terminal analogues.
struct Perspective {
  HistoryLabel history = HistoryLabel::kGenuine;
  ActorKind actor = ActorKind::kCardHolder;
  SignalKind signal = SignalKind::kAmount;

  int index() const {
    return (actor == ActorKind::kTerminal ? 4 : 0) +
           (history == HistoryLabel::kCompromised ? 2 : 0) +
           (signal == SignalKind::kTimeDelta ? 1 : 0);
  }
  std::string name() const;
  static Perspective from_index(int index);
  static const std::array<Perspective, 8>& all();

  friend bool operator==(const Perspective& a, const Perspective& b) {
    return a.index() == b.index();
  }
  friend bool operator<(const Perspective& a, const Perspective& b) {
    return a.index() < b.index();
  }
};

// All of one actor's transactions in chronological order
// (timestamp ascending, ties broken by tx_id ascending).
struct ActorHistory {
  std::string actor_id;
  ActorKind kind = ActorKind::kCardHolder;
  std::vector<Transaction> transactions;
};

// Partitions transactions into per-actor chronological histories.
// Output is sorted by actor_id, so any input permutation yields the same
// result.
std::vector<ActorHistory> group_by_actor(const std::vector<Transaction>& txns,
                                         ActorKind kind);

// Amount    -> ln(1 + amount) per transaction, length |history|.
// TimeDelta -> ln(1 + seconds since the actor's previous transaction),
//              attributed to the later transaction, length |history| - 1.
hmm::ObservationSequence extract_signal(const ActorHistory& history, SignalKind signal);

// Splits histories into (genuine, compromised): a history is compromised iff
// any of its transactions is flagged as fraud.
std::pair<std::vector<ActorHistory>, std::vector<ActorHistory>> partition_perspectives(
    std::vector<ActorHistory> histories);

// The eight training corpora keyed by perspective. Zero-length sequences are
// dropped; a corpus may end up empty (callers decide how to report that).
std::map<Perspective, std::vector<hmm::ObservationSequence>> build_training_corpora(
    const std::vector<Transaction>& txns);

// The last min(w, available) observations of extract_signal over the history
// prefix ending at the target transaction. May be empty only for TimeDelta
// at an actor's first transaction.
hmm::ObservationSequence window(const ActorHistory& history, std::uint64_t target_tx_id,
                                SignalKind signal, int w);

// Same, with the target given as a position in history.transactions.
hmm::ObservationSequence window_at(const ActorHistory& history, std::size_t pos,
                                   SignalKind signal, int w);

}  // namespace fraudml::seq
