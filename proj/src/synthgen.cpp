#include "fraudml/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "fraudml/rng.hpp"

namespace fraudml::synth {

namespace {

constexpr std::int64_t kSecondsPerDay = 86400;
constexpr std::int64_t kEpochStart = 1600041600;  // 2020-09-14 00:00:00 UTC

// Disjoint RNG stream ranges: cards use their index, terminals and fraud
// bursts are offset into distinct high ranges.
constexpr std::uint64_t kTerminalStreamBase = std::uint64_t{1} << 40;
constexpr std::uint64_t kBurstStreamBase = std::uint64_t{1} << 41;

struct CardProfile {
  double amount_mu = 0.0;
  double amount_sigma = 0.0;
  double mean_gap_seconds = 0.0;
  int home_country = 0;
  int card_type = 0;
  std::vector<int> preferred_terminals;
  bool compromised = false;
  double compromise_draw = 1.0;
};

struct Event {
  std::int64_t timestamp = 0;
  int card = 0;
  int terminal = 0;
  double amount = 0.0;
  int country = 0;
  int card_type = 0;
  bool fraud = false;
  int order = 0;  // per-card generation ordinal, tie-break for the merge
};

double round_cents(double amount) {
  return std::max(0.01, std::round(amount * 100.0) / 100.0);
}

std::string padded_id(char prefix, int value, int width) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%c%0*d", prefix, width, value);
  return buf;
}

double empirical_quantile(const std::vector<double>& sorted, double q) {
  const std::size_t n = sorted.size();
  const std::size_t idx = std::min<std::size_t>(
      n - 1, static_cast<std::size_t>(q * static_cast<double>(n)));
  return sorted[idx];
}

}  // namespace

std::vector<seq::Transaction> generate(const GenConfig& config) {
  if (config.n_cards < 0 || config.n_terminals < 0 || config.n_days < 0) {
    throw std::invalid_argument("synthgen: negative counts");
  }
  if (!(config.mean_txns_per_card_per_day > 0.0)) {
    throw std::invalid_argument("synthgen: mean_txns_per_card_per_day must be positive");
  }
  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!in_unit(config.fraud_card_fraction) || !in_unit(config.fraud_terminal_fraction) ||
      !(config.target_fraud_rate >= 0.0 && config.target_fraud_rate < 1.0)) {
    throw std::invalid_argument("synthgen: fractions out of range");
  }
  if (config.countries.empty() || config.card_types.empty()) {
    throw std::invalid_argument("synthgen: need at least one country and card type");
  }

  const std::int64_t span = static_cast<std::int64_t>(config.n_days) * kSecondsPerDay;
  const std::int64_t t_end = kEpochStart + span;

  std::vector<CardProfile> cards(config.n_cards);
  std::vector<std::vector<Event>> per_card(config.n_cards);
  std::vector<std::vector<double>> genuine_amounts(config.n_cards);

  for (int c = 0; c < config.n_cards; ++c) {
    rng::CounterRng gen(config.seed, static_cast<std::uint64_t>(c));
    CardProfile& card = cards[c];
    card.amount_mu = 3.0 + 0.9 * gen.next_normal();
    card.amount_sigma = 0.3 + 0.3 * gen.next_unit();
    const double daily_rate =
        config.mean_txns_per_card_per_day * std::exp(0.5 * gen.next_normal());
    card.mean_gap_seconds = static_cast<double>(kSecondsPerDay) / daily_rate;
    card.home_country = static_cast<int>(gen.next_below(config.countries.size()));
    card.card_type = static_cast<int>(gen.next_below(config.card_types.size()));
    const int n_preferred = 2 + static_cast<int>(gen.next_below(3));
    for (int k = 0; k < n_preferred && config.n_terminals > 0; ++k) {
      card.preferred_terminals.push_back(
          static_cast<int>(gen.next_below(config.n_terminals)));
    }
    card.compromise_draw = gen.next_unit();
    card.compromised = card.compromise_draw < config.fraud_card_fraction;

    if (span == 0 || config.n_terminals == 0) continue;

    auto pick_terminal = [&] {
      if (gen.next_unit() < 0.7 && !card.preferred_terminals.empty()) {
        return card.preferred_terminals[gen.next_below(card.preferred_terminals.size())];
      }
      return static_cast<int>(gen.next_below(config.n_terminals));
    };
    auto emit = [&](std::int64_t ts) {
      Event e;
      e.timestamp = ts;
      e.card = c;
      e.terminal = pick_terminal();
      e.amount =
          round_cents(std::exp(card.amount_mu + card.amount_sigma * gen.next_normal()));
      e.country = gen.next_unit() < 0.95
                      ? card.home_country
                      : static_cast<int>(gen.next_below(config.countries.size()));
      e.card_type = card.card_type;
      e.fraud = false;
      e.order = static_cast<int>(per_card[c].size());
      per_card[c].push_back(e);
      genuine_amounts[c].push_back(e.amount);
    };

    std::int64_t t =
        kEpochStart + static_cast<std::int64_t>(gen.next_exponential(card.mean_gap_seconds));
    while (t < t_end) {
      emit(t);
      // Occasional same-day shopping session: a few purchases 10-90 min apart.
      if (gen.next_unit() < 0.15) {
        const int extras = 1 + static_cast<int>(gen.next_below(3));
        std::int64_t ts = t;
        for (int k = 0; k < extras; ++k) {
          ts += 600 + static_cast<std::int64_t>(gen.next_below(4801));
          if (ts >= t_end) break;
          emit(ts);
        }
      }
      t += std::max<std::int64_t>(
          1, static_cast<std::int64_t>(gen.next_exponential(card.mean_gap_seconds)));
    }
  }

  std::size_t genuine_total = 0;
  for (const auto& events : per_card) genuine_total += events.size();

  // Fraud campaigns sized to hit the target rate.
  if (config.target_fraud_rate > 0.0 && genuine_total > 0) {
    const double rate = config.target_fraud_rate;
    const std::size_t needed = static_cast<std::size_t>(
        std::llround(rate / (1.0 - rate) * static_cast<double>(genuine_total)));
    if (needed > 0) {
      if (config.fraud_card_fraction <= 0.0 || config.n_cards == 0) {
        throw std::invalid_argument(
            "synthgen: positive target_fraud_rate needs fraud_card_fraction > 0");
      }
      if (config.fraud_terminal_fraction <= 0.0 || config.n_terminals == 0) {
        throw std::invalid_argument(
            "synthgen: positive target_fraud_rate needs fraud_terminal_fraction > 0");
      }
      std::vector<int> compromised_cards;
      for (int c = 0; c < config.n_cards; ++c) {
        if (cards[c].compromised) compromised_cards.push_back(c);
      }
      if (compromised_cards.empty()) {
        // Small configs can miss every Bernoulli draw; compromise the card
        // with the lowest draw so the config stays feasible.
        int best = 0;
        for (int c = 1; c < config.n_cards; ++c) {
          if (cards[c].compromise_draw < cards[best].compromise_draw) best = c;
        }
        cards[best].compromised = true;
        compromised_cards.push_back(best);
      }
      std::vector<int> compromised_terminals;
      for (int t = 0; t < config.n_terminals; ++t) {
        rng::CounterRng gen(config.seed, kTerminalStreamBase + t);
        if (gen.next_unit() < config.fraud_terminal_fraction) {
          compromised_terminals.push_back(t);
        }
      }
      if (compromised_terminals.empty()) {
        double best_draw = 2.0;
        int best = 0;
        for (int t = 0; t < config.n_terminals; ++t) {
          rng::CounterRng gen(config.seed, kTerminalStreamBase + t);
          const double u = gen.next_unit();
          if (u < best_draw) {
            best_draw = u;
            best = t;
          }
        }
        compromised_terminals.push_back(best);
      }

      std::size_t planted = 0;
      std::uint64_t burst_no = 0;
      while (planted < needed) {
        const int c = compromised_cards[burst_no % compromised_cards.size()];
        rng::CounterRng gen(config.seed, kBurstStreamBase + burst_no);
        ++burst_no;
        const CardProfile& card = cards[c];

        double q10, q95;
        if (!genuine_amounts[c].empty()) {
          std::vector<double> sorted = genuine_amounts[c];
          std::sort(sorted.begin(), sorted.end());
          q10 = empirical_quantile(sorted, 0.10);
          q95 = empirical_quantile(sorted, 0.95);
        } else {
          q10 = std::exp(card.amount_mu + card.amount_sigma * rng::inverse_normal_cdf(0.10));
          q95 = std::exp(card.amount_mu + card.amount_sigma * rng::inverse_normal_cdf(0.95));
        }

        const int n_test = 1 + static_cast<int>(gen.next_below(3));
        const int n_high = 2 + static_cast<int>(gen.next_below(4));
        const int terminal =
            compromised_terminals[gen.next_below(compromised_terminals.size())];
        std::int64_t t = kEpochStart + static_cast<std::int64_t>(
                                           gen.next_unit() *
                                           static_cast<double>(std::max<std::int64_t>(
                                               1, span - 3600)));
        auto emit_fraud = [&](double amount) {
          Event e;
          e.timestamp = t;
          e.card = c;
          e.terminal = terminal;
          e.amount = amount;
          e.country = card.home_country;
          e.card_type = card.card_type;
          e.fraud = true;
          e.order = static_cast<int>(per_card[c].size());
          per_card[c].push_back(e);
          ++planted;
        };
        for (int k = 0; k < n_test; ++k) {
          emit_fraud(round_cents(q10 * (0.25 + 0.65 * gen.next_unit())));
          t += 30 + static_cast<std::int64_t>(gen.next_below(271));
        }
        for (int k = 0; k < n_high; ++k) {
          emit_fraud(round_cents(q95 * (1.1 + 1.4 * gen.next_unit())));
          t += 20 + static_cast<std::int64_t>(gen.next_below(101));
        }
      }
    }
  }

  // Per-card merge with strictly increasing timestamps.
  std::vector<Event> all;
  all.reserve(genuine_total);
  for (int c = 0; c < config.n_cards; ++c) {
    auto& events = per_card[c];
    std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
      return a.timestamp != b.timestamp ? a.timestamp < b.timestamp
                                        : a.order < b.order;
    });
    std::int64_t prev = -1;
    for (Event& e : events) {
      if (e.timestamp <= prev) e.timestamp = prev + 1;
      prev = e.timestamp;
      all.push_back(e);
    }
  }

  std::sort(all.begin(), all.end(), [](const Event& a, const Event& b) {
    if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
    if (a.card != b.card) return a.card < b.card;
    return a.order < b.order;
  });

  std::vector<seq::Transaction> txns;
  txns.reserve(all.size());
  const int card_width = 6, terminal_width = 5;
  for (std::size_t i = 0; i < all.size(); ++i) {
    const Event& e = all[i];
    seq::Transaction tx;
    tx.tx_id = static_cast<std::uint64_t>(i + 1);
    tx.timestamp = e.timestamp;
    tx.card_id = padded_id('c', e.card, card_width);
    tx.terminal_id = padded_id('t', e.terminal, terminal_width);
    tx.amount = e.amount;
    tx.country = config.countries[e.country];
    tx.card_type = config.card_types[e.card_type];
    tx.is_fraud = e.fraud;
    txns.push_back(std::move(tx));
  }
  return txns;
}

}  // namespace fraudml::synth
