#include "fraudml/sequencer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace fraudml::seq {

std::string Perspective::name() const {
  std::string out = actor == ActorKind::kCardHolder ? "ch" : "tm";
  out += history == HistoryLabel::kGenuine ? "_genuine" : "_compromised";
  out += signal == SignalKind::kAmount ? "_amount" : "_timedelta";
  return out;
}

Perspective Perspective::from_index(int index) {
  if (index < 0 || index > 7) throw std::out_of_range("perspective index");
  Perspective p;
  p.actor = index >= 4 ? ActorKind::kTerminal : ActorKind::kCardHolder;
  p.history = (index & 2) ? HistoryLabel::kCompromised : HistoryLabel::kGenuine;
  p.signal = (index & 1) ? SignalKind::kTimeDelta : SignalKind::kAmount;
  return p;
}

const std::array<Perspective, 8>& Perspective::all() {
  static const std::array<Perspective, 8> values = [] {
    std::array<Perspective, 8> out{};
    for (int i = 0; i < 8; ++i) out[i] = from_index(i);
    return out;
  }();
  return values;
}

std::vector<ActorHistory> group_by_actor(const std::vector<Transaction>& txns,
                                         ActorKind kind) {
  std::unordered_map<std::string, std::size_t> slot_of;
  std::vector<ActorHistory> histories;
  for (const Transaction& tx : txns) {
    const std::string& id = kind == ActorKind::kCardHolder ? tx.card_id : tx.terminal_id;
    auto [it, inserted] = slot_of.try_emplace(id, histories.size());
    if (inserted) {
      histories.push_back(ActorHistory{id, kind, {}});
    }
    histories[it->second].transactions.push_back(tx);
  }
  for (ActorHistory& h : histories) {
    std::sort(h.transactions.begin(), h.transactions.end(),
              [](const Transaction& a, const Transaction& b) {
                return a.timestamp != b.timestamp ? a.timestamp < b.timestamp
                                                  : a.tx_id < b.tx_id;
              });
  }
  std::sort(histories.begin(), histories.end(),
            [](const ActorHistory& a, const ActorHistory& b) {
              return a.actor_id < b.actor_id;
            });
  return histories;
}

hmm::ObservationSequence extract_signal(const ActorHistory& history, SignalKind signal) {
  hmm::ObservationSequence out;
  const auto& txns = history.transactions;
  if (signal == SignalKind::kAmount) {
    out.reserve(txns.size());
    for (const Transaction& tx : txns) out.push_back(std::log1p(tx.amount));
  } else {
    if (txns.size() > 1) {
      out.reserve(txns.size() - 1);
      for (std::size_t i = 1; i < txns.size(); ++i) {
        out.push_back(std::log1p(
            static_cast<double>(txns[i].timestamp - txns[i - 1].timestamp)));
      }
    }
  }
  return out;
}

std::pair<std::vector<ActorHistory>, std::vector<ActorHistory>> partition_perspectives(
    std::vector<ActorHistory> histories) {
  std::vector<ActorHistory> genuine;
  std::vector<ActorHistory> compromised;
  for (ActorHistory& h : histories) {
    const bool has_fraud =
        std::any_of(h.transactions.begin(), h.transactions.end(),
                    [](const Transaction& tx) { return tx.is_fraud; });
    (has_fraud ? compromised : genuine).push_back(std::move(h));
  }
  return {std::move(genuine), std::move(compromised)};
}

std::map<Perspective, std::vector<hmm::ObservationSequence>> build_training_corpora(
    const std::vector<Transaction>& txns) {
  std::map<Perspective, std::vector<hmm::ObservationSequence>> corpora;
  for (const Perspective& p : Perspective::all()) corpora[p] = {};

  for (ActorKind kind : {ActorKind::kCardHolder, ActorKind::kTerminal}) {
    auto [genuine, compromised] = partition_perspectives(group_by_actor(txns, kind));
    for (HistoryLabel label : {HistoryLabel::kGenuine, HistoryLabel::kCompromised}) {
      const auto& histories =
          label == HistoryLabel::kGenuine ? genuine : compromised;
      for (SignalKind signal : {SignalKind::kAmount, SignalKind::kTimeDelta}) {
        auto& corpus = corpora[Perspective{label, kind, signal}];
        for (const ActorHistory& h : histories) {
          auto seq = extract_signal(h, signal);
          if (!seq.empty()) corpus.push_back(std::move(seq));
        }
      }
    }
  }
  return corpora;
}

hmm::ObservationSequence window_at(const ActorHistory& history, std::size_t pos,
                                   SignalKind signal, int w) {
  if (w < 1) throw std::invalid_argument("window size must be >= 1");
  if (pos >= history.transactions.size()) {
    throw std::invalid_argument("window target position out of range");
  }
  const auto& txns = history.transactions;
  hmm::ObservationSequence out;
  if (signal == SignalKind::kAmount) {
    const std::size_t take = std::min<std::size_t>(w, pos + 1);
    out.reserve(take);
    for (std::size_t i = pos + 1 - take; i <= pos; ++i) {
      out.push_back(std::log1p(txns[i].amount));
    }
  } else {
    // pos deltas exist in the prefix; the window keeps the last min(w, pos).
    const std::size_t take = std::min<std::size_t>(w, pos);
    out.reserve(take);
    for (std::size_t i = pos + 1 - take; i <= pos && take > 0; ++i) {
      out.push_back(std::log1p(
          static_cast<double>(txns[i].timestamp - txns[i - 1].timestamp)));
    }
  }
  return out;
}

hmm::ObservationSequence window(const ActorHistory& history, std::uint64_t target_tx_id,
                                SignalKind signal, int w) {
  const auto& txns = history.transactions;
  for (std::size_t i = 0; i < txns.size(); ++i) {
    if (txns[i].tx_id == target_tx_id) return window_at(history, i, signal, w);
  }
  throw std::invalid_argument("target transaction not in history");
}

}  // namespace fraudml::seq
