#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fraudml/hmm.hpp"
#include "fraudml/sequencer.hpp"

namespace fraudml::feat {

inline constexpr std::int64_t kAggregationWindowSeconds = 86400;

// The eight likelihood features in canonical perspective order, plus the
// window context: hist_len_* is the actor-history position of the current
// transaction (1-based), capped at the registry window size.
struct HmmFeatureSet {
  std::array<double, 8> values{};
  int hist_len_ch = 1;
  int hist_len_tm = 1;
};

// Rolling 24h counts and amount sums over the two actor histories.
// aggch3/4 filter the card holder's window by the current transaction's
// country; aggtm3/4 filter the terminal's window by its card type.
struct AggregateFeatureSet {
  std::int64_t aggch1 = 0;  // # card-holder transactions in 24h
  double aggch2 = 0.0;      // amount sum of those
  std::int64_t aggch3 = 0;  // # of those in the current country
  double aggch4 = 0.0;      // amount sum of those
  std::int64_t aggtm1 = 0;  // # terminal transactions in 24h
  double aggtm2 = 0.0;      // amount sum of those
  std::int64_t aggtm3 = 0;  // # of those with the current card type
  double aggtm4 = 0.0;      // amount sum of those
};

struct EnrichedTransaction {
  seq::Transaction tx;
  AggregateFeatureSet agg;
  HmmFeatureSet hmm;
  bool label = false;
};

// The eight trained models indexed by Perspective::index().
struct ModelRegistry {
  std::array<hmm::TrainedModel, 8> models;
  int window_size = 3;

  const hmm::TrainedModel& model_for(const seq::Perspective& p) const;
};

// Length-normalized window log-likelihood under each of the eight models.
// An empty window (TimeDelta at an actor's first transaction) scores 0.0;
// hist_len_ch / hist_len_tm expose the window context instead.
HmmFeatureSet hmm_features(std::uint64_t tx_id, const seq::ActorHistory& ch_history,
                           const seq::ActorHistory& tm_history,
                           const ModelRegistry& registry);

// Counts and sums over the (t - 24h, t] windows ending at the transaction;
// the current transaction is always included.
AggregateFeatureSet aggregate_features(std::uint64_t tx_id,
                                       const seq::ActorHistory& ch_history,
                                       const seq::ActorHistory& tm_history);

// Enriches every transaction, same order as the input. Features use only
// transactions at or before the current one (by timestamp, then tx_id)
// within each actor history; aggregate windows run on amortized-O(1)
// per-actor sweeps.
std::vector<EnrichedTransaction> enrich_dataset(const std::vector<seq::Transaction>& txns,
                                                const ModelRegistry& registry);

extern const std::string kEnrichedCsvHeader;

void write_enriched_csv(std::ostream& out, const std::vector<EnrichedTransaction>& rows);
void write_enriched_csv(const std::string& path,
                        const std::vector<EnrichedTransaction>& rows);
std::vector<EnrichedTransaction> read_enriched_csv(const std::string& path);

}  // namespace fraudml::feat
