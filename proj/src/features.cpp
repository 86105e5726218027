#include "fraudml/features.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

#include "fraudml/csv.hpp"

namespace fraudml::feat {

using seq::ActorHistory;
using seq::ActorKind;
using seq::Perspective;
using seq::SignalKind;
using seq::Transaction;

const hmm::TrainedModel& ModelRegistry::model_for(const Perspective& p) const {
  const hmm::TrainedModel& tm = models[p.index()];
  if (tm.model.n_states < 1) {
    throw std::runtime_error("model registry is missing perspective " + p.name());
  }
  return tm;
}

namespace {

std::size_t position_in(const ActorHistory& history, std::uint64_t tx_id) {
  for (std::size_t i = 0; i < history.transactions.size(); ++i) {
    if (history.transactions[i].tx_id == tx_id) return i;
  }
  throw std::invalid_argument("transaction not in actor history");
}

// Fills the four features of one actor side plus its history-length context.
void score_actor_side(const ActorHistory& history, std::size_t pos, ActorKind kind,
                      const ModelRegistry& registry, HmmFeatureSet& out) {
  for (SignalKind signal : {SignalKind::kAmount, SignalKind::kTimeDelta}) {
    const auto win = seq::window_at(history, pos, signal, registry.window_size);
    for (seq::HistoryLabel label :
         {seq::HistoryLabel::kGenuine, seq::HistoryLabel::kCompromised}) {
      const Perspective p{label, kind, signal};
      const hmm::TrainedModel& tm = registry.model_for(p);
      out.values[p.index()] =
          win.empty() ? 0.0 : tm.score(win) / static_cast<double>(win.size());
    }
  }
  const int hist_len =
      std::min<int>(static_cast<int>(pos) + 1, registry.window_size);
  (kind == ActorKind::kCardHolder ? out.hist_len_ch : out.hist_len_tm) = hist_len;
}

// Direct 24h window scan ending at `pos`; used for single-transaction calls.
void aggregate_side(const ActorHistory& history, std::size_t pos, ActorKind kind,
                    AggregateFeatureSet& out) {
  const auto& txns = history.transactions;
  const Transaction& cur = txns[pos];
  const std::int64_t cutoff = cur.timestamp - kAggregationWindowSeconds;
  std::int64_t count = 0, filtered_count = 0;
  double sum = 0.0, filtered_sum = 0.0;
  for (std::size_t i = pos + 1; i-- > 0;) {
    if (txns[i].timestamp <= cutoff) break;
    ++count;
    sum += txns[i].amount;
    const bool match = kind == ActorKind::kCardHolder
                           ? txns[i].country == cur.country
                           : txns[i].card_type == cur.card_type;
    if (match) {
      ++filtered_count;
      filtered_sum += txns[i].amount;
    }
  }
  if (kind == ActorKind::kCardHolder) {
    out.aggch1 = count;
    out.aggch2 = sum;
    out.aggch3 = filtered_count;
    out.aggch4 = filtered_sum;
  } else {
    out.aggtm1 = count;
    out.aggtm2 = sum;
    out.aggtm3 = filtered_count;
    out.aggtm4 = filtered_sum;
  }
}

}  // namespace

HmmFeatureSet hmm_features(std::uint64_t tx_id, const ActorHistory& ch_history,
                           const ActorHistory& tm_history,
                           const ModelRegistry& registry) {
  HmmFeatureSet out;
  score_actor_side(ch_history, position_in(ch_history, tx_id), ActorKind::kCardHolder,
                   registry, out);
  score_actor_side(tm_history, position_in(tm_history, tx_id), ActorKind::kTerminal,
                   registry, out);
  return out;
}

AggregateFeatureSet aggregate_features(std::uint64_t tx_id,
                                       const ActorHistory& ch_history,
                                       const ActorHistory& tm_history) {
  AggregateFeatureSet out;
  aggregate_side(ch_history, position_in(ch_history, tx_id), ActorKind::kCardHolder,
                 out);
  aggregate_side(tm_history, position_in(tm_history, tx_id), ActorKind::kTerminal,
                 out);
  return out;
}

namespace {

// Per-category positions and amount prefix sums within one history; window
// totals come out as prefix differences, so earlier rows never see the
// effect of later ones.
struct CategoryGroup {
  std::vector<std::size_t> positions;
  std::vector<double> prefix{0.0};
};

void sweep_actor(const std::vector<ActorHistory>& histories, ActorKind kind,
                 const ModelRegistry& registry,
                 const std::unordered_map<std::uint64_t, std::size_t>& row_of,
                 std::vector<EnrichedTransaction>& out) {
  for (const ActorHistory& h : histories) {
    const auto& txns = h.transactions;
    std::vector<double> prefix(txns.size() + 1, 0.0);
    for (std::size_t i = 0; i < txns.size(); ++i) {
      prefix[i + 1] = prefix[i] + txns[i].amount;
    }
    std::unordered_map<std::string, CategoryGroup> groups;
    std::size_t left = 0;
    for (std::size_t pos = 0; pos < txns.size(); ++pos) {
      const Transaction& cur = txns[pos];
      const std::string& key =
          kind == ActorKind::kCardHolder ? cur.country : cur.card_type;
      CategoryGroup& group = groups[key];
      group.positions.push_back(pos);
      group.prefix.push_back(group.prefix.back() + cur.amount);

      const std::int64_t cutoff = cur.timestamp - kAggregationWindowSeconds;
      while (txns[left].timestamp <= cutoff) ++left;

      const std::int64_t count = static_cast<std::int64_t>(pos - left + 1);
      const double sum = prefix[pos + 1] - prefix[left];
      const std::size_t lo =
          std::lower_bound(group.positions.begin(), group.positions.end(), left) -
          group.positions.begin();
      const std::int64_t filtered_count =
          static_cast<std::int64_t>(group.positions.size() - lo);
      const double filtered_sum = group.prefix.back() - group.prefix[lo];

      EnrichedTransaction& row = out[row_of.at(cur.tx_id)];
      if (kind == ActorKind::kCardHolder) {
        row.agg.aggch1 = count;
        row.agg.aggch2 = sum;
        row.agg.aggch3 = filtered_count;
        row.agg.aggch4 = filtered_sum;
      } else {
        row.agg.aggtm1 = count;
        row.agg.aggtm2 = sum;
        row.agg.aggtm3 = filtered_count;
        row.agg.aggtm4 = filtered_sum;
      }
      score_actor_side(h, pos, kind, registry, row.hmm);
    }
  }
}

}  // namespace

std::vector<EnrichedTransaction> enrich_dataset(const std::vector<Transaction>& txns,
                                                const ModelRegistry& registry) {
  for (const Perspective& p : Perspective::all()) registry.model_for(p);

  std::vector<EnrichedTransaction> out(txns.size());
  std::unordered_map<std::uint64_t, std::size_t> row_of;
  row_of.reserve(txns.size());
  for (std::size_t i = 0; i < txns.size(); ++i) {
    out[i].tx = txns[i];
    out[i].label = txns[i].is_fraud;
    if (!row_of.emplace(txns[i].tx_id, i).second) {
      throw std::invalid_argument("duplicate tx_id " + std::to_string(txns[i].tx_id));
    }
  }
  sweep_actor(seq::group_by_actor(txns, ActorKind::kCardHolder), ActorKind::kCardHolder,
              registry, row_of, out);
  sweep_actor(seq::group_by_actor(txns, ActorKind::kTerminal), ActorKind::kTerminal,
              registry, row_of, out);
  return out;
}

const std::string kEnrichedCsvHeader =
    "tx_id,timestamp,card_id,terminal_id,amount,country,card_type,"
    "aggch1,aggch2,aggch3,aggch4,aggtm1,aggtm2,aggtm3,aggtm4,"
    "hmm_1,hmm_2,hmm_3,hmm_4,hmm_5,hmm_6,hmm_7,hmm_8,"
    "hist_len_ch,hist_len_tm,label";

void write_enriched_csv(std::ostream& out, const std::vector<EnrichedTransaction>& rows) {
  out << kEnrichedCsvHeader << "\n";
  for (const EnrichedTransaction& r : rows) {
    out << r.tx.tx_id << ',' << r.tx.timestamp << ',' << r.tx.card_id << ','
        << r.tx.terminal_id << ',' << io::format_double(r.tx.amount) << ','
        << r.tx.country << ',' << r.tx.card_type << ',' << r.agg.aggch1 << ','
        << io::format_double(r.agg.aggch2) << ',' << r.agg.aggch3 << ','
        << io::format_double(r.agg.aggch4) << ',' << r.agg.aggtm1 << ','
        << io::format_double(r.agg.aggtm2) << ',' << r.agg.aggtm3 << ','
        << io::format_double(r.agg.aggtm4);
    for (double v : r.hmm.values) out << ',' << io::format_double(v);
    out << ',' << r.hmm.hist_len_ch << ',' << r.hmm.hist_len_tm << ','
        << (r.label ? 1 : 0) << "\n";
  }
}

void write_enriched_csv(const std::string& path,
                        const std::vector<EnrichedTransaction>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_enriched_csv(out, rows);
}

std::vector<EnrichedTransaction> read_enriched_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kEnrichedCsvHeader) {
    throw std::runtime_error(path + ": unexpected enriched header");
  }
  std::vector<EnrichedTransaction> rows;
  std::size_t line_no = 1;
  auto to_double = [&](const std::string& f) {
    double v{};
    auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
    if (ec != std::errc{} || p != f.data() + f.size()) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": bad number '" +
                               f + "'");
    }
    return v;
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto f = io::split_csv_line(line);
    if (f.size() != 26) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected 26 fields");
    }
    EnrichedTransaction r;
    r.tx.tx_id = static_cast<std::uint64_t>(to_double(f[0]));
    r.tx.timestamp = static_cast<std::int64_t>(to_double(f[1]));
    r.tx.card_id = f[2];
    r.tx.terminal_id = f[3];
    r.tx.amount = to_double(f[4]);
    r.tx.country = f[5];
    r.tx.card_type = f[6];
    r.agg.aggch1 = static_cast<std::int64_t>(to_double(f[7]));
    r.agg.aggch2 = to_double(f[8]);
    r.agg.aggch3 = static_cast<std::int64_t>(to_double(f[9]));
    r.agg.aggch4 = to_double(f[10]);
    r.agg.aggtm1 = static_cast<std::int64_t>(to_double(f[11]));
    r.agg.aggtm2 = to_double(f[12]);
    r.agg.aggtm3 = static_cast<std::int64_t>(to_double(f[13]));
    r.agg.aggtm4 = to_double(f[14]);
    for (int i = 0; i < 8; ++i) r.hmm.values[i] = to_double(f[15 + i]);
    r.hmm.hist_len_ch = static_cast<int>(to_double(f[23]));
    r.hmm.hist_len_tm = static_cast<int>(to_double(f[24]));
    r.label = f[25] == "1";
    r.tx.is_fraud = r.label;
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace fraudml::feat
