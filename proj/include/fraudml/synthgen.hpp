#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fraudml/sequencer.hpp"

namespace fraudml::synth {

struct GenConfig {
  int n_cards = 1000;
  int n_terminals = 200;
  int n_days = 30;
  double mean_txns_per_card_per_day = 0.5;
  double fraud_card_fraction = 0.03;
  double fraud_terminal_fraction = 0.05;
  double target_fraud_rate = 0.01;
  std::uint64_t seed = 0;
  std::vector<std::string> countries{"BE", "FR", "DE", "NL", "LU"};
  std::vector<std::string> card_types{"debit", "credit", "gold"};
};

// Seeded synthetic transaction stream. Genuine traffic follows per-card
// lognormal amount habits and exponential inter-arrival habits with
// occasional same-day shopping sessions. Fraud arrives as campaigns on
// compromised cards: 1-3 low test amounts (below the card's realized 10th
// amount percentile) followed by 2-5 high amounts (above its realized 95th
// percentile), seconds-to-minutes apart, placed at compromised terminals.
//
// Output is sorted by (timestamp, tx_id) with tx_id assigned in that order;
// per-card timestamps are strictly increasing. Deterministic per seed: all
// draws are counter-based keyed by (seed, card index, draw counter), so
// per-card generation parallelizes without changing the result.
//
// Throws std::invalid_argument on an infeasible config (a positive target
// fraud rate with no compromised cards or terminals possible).
std::vector<seq::Transaction> generate(const GenConfig& config);

}  // namespace fraudml::synth
