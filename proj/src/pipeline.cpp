#include "fraudml/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "fraudml/csv.hpp"
#include "fraudml/metrics.hpp"
#include "fraudml/parallel.hpp"
#include "fraudml/rng.hpp"

namespace fraudml::pipe {

namespace fs = std::filesystem;

const std::vector<std::string>& default_feature_sets() {
  static const std::vector<std::string> sets = {
      "raw", "raw+aggCH", "raw+aggCH+aggTM", "raw+aggCH+HMM",
      "raw+aggCH+aggTM+HMM"};
  return sets;
}

namespace {

const std::vector<std::string>& group_columns(const std::string& group) {
  static const std::vector<std::string> raw = {
      "log1p_amount", "hour_of_day", "day_of_week", "country_code",
      "card_type_code"};
  static const std::vector<std::string> agg_ch = {"aggch1", "aggch2", "aggch3",
                                                  "aggch4"};
  static const std::vector<std::string> agg_tm = {"aggtm1", "aggtm2", "aggtm3",
                                                  "aggtm4"};
  static const std::vector<std::string> hmm_cols = {
      "hmm_1", "hmm_2", "hmm_3", "hmm_4", "hmm_5",
      "hmm_6", "hmm_7", "hmm_8", "hist_len_ch", "hist_len_tm"};
  if (group == "raw") return raw;
  if (group == "aggCH") return agg_ch;
  if (group == "aggTM") return agg_tm;
  if (group == "HMM") return hmm_cols;
  throw std::invalid_argument("unknown feature group: " + group);
}

}  // namespace

std::vector<std::string> feature_columns(const std::string& set_name) {
  std::vector<std::string> columns;
  std::size_t start = 0;
  while (start <= set_name.size()) {
    const std::size_t plus = set_name.find('+', start);
    const std::string group = set_name.substr(
        start, plus == std::string::npos ? std::string::npos : plus - start);
    const auto& cols = group_columns(group);
    columns.insert(columns.end(), cols.begin(), cols.end());
    if (plus == std::string::npos) break;
    start = plus + 1;
  }
  return columns;
}

std::pair<std::size_t, std::size_t> split_boundaries(
    const std::vector<seq::Transaction>& txns, const std::array<double, 3>& fractions) {
  double sum = 0.0;
  for (double f : fractions) {
    if (!(f > 0.0)) throw std::invalid_argument("split fractions must be positive");
    sum += f;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("split fractions must sum to 1");
  }
  const std::size_t n = txns.size();
  for (std::size_t i = 1; i < n; ++i) {
    if (txns[i].timestamp < txns[i - 1].timestamp ||
        (txns[i].timestamp == txns[i - 1].timestamp &&
         txns[i].tx_id <= txns[i - 1].tx_id)) {
      throw std::invalid_argument("transactions not sorted by (timestamp, tx_id)");
    }
  }
  if (n == 0) return {0, 0};

  // Index of the first transaction strictly after the quantile timestamp;
  // boundary ties stay on the left.
  auto cut = [&](double fraction) -> std::size_t {
    const std::size_t k = static_cast<std::size_t>(
        std::ceil(fraction * static_cast<double>(n) - 1e-9));
    if (k == 0) return 0;
    const std::int64_t boundary = txns[k - 1].timestamp;
    std::size_t i = k;
    while (i < n && txns[i].timestamp == boundary) ++i;
    return i;
  };
  const std::size_t a = cut(fractions[0]);
  const std::size_t b = std::max(a, cut(fractions[0] + fractions[1]));
  return {a, b};
}

std::tuple<std::vector<seq::Transaction>, std::vector<seq::Transaction>,
           std::vector<seq::Transaction>>
temporal_split(const std::vector<seq::Transaction>& txns,
               const std::array<double, 3>& fractions) {
  const auto [a, b] = split_boundaries(txns, fractions);
  return {std::vector<seq::Transaction>(txns.begin(), txns.begin() + a),
          std::vector<seq::Transaction>(txns.begin() + a, txns.begin() + b),
          std::vector<seq::Transaction>(txns.begin() + b, txns.end())};
}

CategoryEncoder CategoryEncoder::fit(const std::vector<std::string>& values) {
  CategoryEncoder enc;
  std::set<std::string> unique(values.begin(), values.end());
  int code = 1;  // 0 is reserved for unseen categories
  for (const std::string& v : unique) enc.codes[v] = code++;
  return enc;
}

nlohmann::ordered_json encoders_to_json(const Encoders& enc) {
  nlohmann::ordered_json j;
  j["format_version"] = 1;
  j["country"] = enc.country.codes;
  j["card_type"] = enc.card_type.codes;
  return j;
}

Encoders encoders_from_json(const nlohmann::json& j) {
  if (j.at("format_version").get<int>() != 1) {
    throw std::runtime_error("unsupported encoders format_version");
  }
  Encoders enc;
  enc.country.codes = j.at("country").get<std::map<std::string, int>>();
  enc.card_type.codes = j.at("card_type").get<std::map<std::string, int>>();
  return enc;
}

void save_encoders(const Encoders& enc, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << encoders_to_json(enc).dump(2) << "\n";
}

Encoders load_encoders(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open encoders file: " + path);
  nlohmann::json j;
  in >> j;
  return encoders_from_json(j);
}

namespace {

enum class Column {
  kLog1pAmount, kHourOfDay, kDayOfWeek, kCountryCode, kCardTypeCode,
  kAggCh1, kAggCh2, kAggCh3, kAggCh4, kAggTm1, kAggTm2, kAggTm3, kAggTm4,
  kHmm1, kHmm2, kHmm3, kHmm4, kHmm5, kHmm6, kHmm7, kHmm8,
  kHistLenCh, kHistLenTm,
};

Column column_id(const std::string& name) {
  static const std::map<std::string, Column> ids = {
      {"log1p_amount", Column::kLog1pAmount}, {"hour_of_day", Column::kHourOfDay},
      {"day_of_week", Column::kDayOfWeek},    {"country_code", Column::kCountryCode},
      {"card_type_code", Column::kCardTypeCode},
      {"aggch1", Column::kAggCh1}, {"aggch2", Column::kAggCh2},
      {"aggch3", Column::kAggCh3}, {"aggch4", Column::kAggCh4},
      {"aggtm1", Column::kAggTm1}, {"aggtm2", Column::kAggTm2},
      {"aggtm3", Column::kAggTm3}, {"aggtm4", Column::kAggTm4},
      {"hmm_1", Column::kHmm1}, {"hmm_2", Column::kHmm2}, {"hmm_3", Column::kHmm3},
      {"hmm_4", Column::kHmm4}, {"hmm_5", Column::kHmm5}, {"hmm_6", Column::kHmm6},
      {"hmm_7", Column::kHmm7}, {"hmm_8", Column::kHmm8},
      {"hist_len_ch", Column::kHistLenCh}, {"hist_len_tm", Column::kHistLenTm},
  };
  auto it = ids.find(name);
  if (it == ids.end()) throw std::invalid_argument("unknown feature column: " + name);
  return it->second;
}

double column_value(const feat::EnrichedTransaction& r, Column col,
                    const Encoders& enc) {
  switch (col) {
    case Column::kLog1pAmount: return std::log1p(r.tx.amount);
    case Column::kHourOfDay:
      return static_cast<double>((r.tx.timestamp % 86400) / 3600);
    case Column::kDayOfWeek:  // 0 = Monday
      return static_cast<double>((r.tx.timestamp / 86400 + 3) % 7);
    case Column::kCountryCode: return enc.country.encode(r.tx.country);
    case Column::kCardTypeCode: return enc.card_type.encode(r.tx.card_type);
    case Column::kAggCh1: return static_cast<double>(r.agg.aggch1);
    case Column::kAggCh2: return r.agg.aggch2;
    case Column::kAggCh3: return static_cast<double>(r.agg.aggch3);
    case Column::kAggCh4: return r.agg.aggch4;
    case Column::kAggTm1: return static_cast<double>(r.agg.aggtm1);
    case Column::kAggTm2: return r.agg.aggtm2;
    case Column::kAggTm3: return static_cast<double>(r.agg.aggtm3);
    case Column::kAggTm4: return r.agg.aggtm4;
    case Column::kHmm1: return r.hmm.values[0];
    case Column::kHmm2: return r.hmm.values[1];
    case Column::kHmm3: return r.hmm.values[2];
    case Column::kHmm4: return r.hmm.values[3];
    case Column::kHmm5: return r.hmm.values[4];
    case Column::kHmm6: return r.hmm.values[5];
    case Column::kHmm7: return r.hmm.values[6];
    case Column::kHmm8: return r.hmm.values[7];
    case Column::kHistLenCh: return static_cast<double>(r.hmm.hist_len_ch);
    case Column::kHistLenTm: return static_cast<double>(r.hmm.hist_len_tm);
  }
  throw std::logic_error("unreachable");
}

}  // namespace

rf::LabeledData make_features(const std::vector<feat::EnrichedTransaction>& rows,
                              const std::vector<std::string>& columns,
                              const Encoders& encoders) {
  std::vector<Column> ids;
  ids.reserve(columns.size());
  for (const std::string& c : columns) ids.push_back(column_id(c));

  rf::LabeledData data;
  data.x.rows = rows.size();
  data.x.cols = ids.size();
  data.x.values.reserve(rows.size() * ids.size());
  data.y.reserve(rows.size());
  for (const feat::EnrichedTransaction& r : rows) {
    for (Column id : ids) data.x.values.push_back(column_value(r, id, encoders));
    data.y.push_back(r.label ? 1 : 0);
  }
  return data;
}

feat::ModelRegistry train_registry(const std::vector<seq::Transaction>& train_txns,
                                   const ExperimentConfig& config,
                                   std::vector<HmmDiagnostics>* diagnostics,
                                   int n_threads) {
  auto corpora = seq::build_training_corpora(train_txns);
  for (const seq::Perspective& p : seq::Perspective::all()) {
    if (corpora.at(p).empty()) {
      throw std::runtime_error(
          "training corpus for perspective " + p.name() +
          " is empty; the training split needs both genuine and compromised "
          "histories (generate more data or raise the fraud rate)");
    }
  }

  feat::ModelRegistry registry;
  registry.window_size = config.window_size;
  std::array<HmmDiagnostics, 8> diag;

  auto fit_one = [&](int index) {
    const seq::Perspective p = seq::Perspective::from_index(index);
    const auto& corpus = corpora.at(p);
    hmm::FitConfig fc = config.fit;
    fc.emission_kind = config.emission_kind;
    fc.seed = rng::derive_stream(config.seed, static_cast<std::uint64_t>(index));

    hmm::TrainedModel tm;
    hmm::FitResult result;
    if (config.emission_kind == hmm::EmissionKind::kCategorical) {
      auto binner = hmm::QuantileBinner::fit(corpus, config.n_bins);
      std::vector<hmm::ObservationSequence> mapped;
      mapped.reserve(corpus.size());
      for (const auto& s : corpus) mapped.push_back(binner.apply(s));
      fc.n_symbols = binner.n_symbols();
      result = hmm::fit_baum_welch(mapped, config.n_states, fc);
      tm.bin_edges = std::move(binner.edges);
    } else {
      result = hmm::fit_baum_welch(corpus, config.n_states, fc);
    }
    tm.model = std::move(result.model);
    registry.models[index] = std::move(tm);

    HmmDiagnostics& d = diag[index];
    d.perspective = p.name();
    d.sequences = corpus.size();
    for (const auto& s : corpus) d.observations += s.size();
    d.iterations = result.iterations;
    d.converged = result.converged;
    d.best_restart = result.best_restart;
    d.final_log_likelihood = result.final_log_likelihood;
  };

  if (effective_threads(n_threads) > 1) {
    std::vector<std::future<void>> tasks;
    for (int i = 0; i < 8; ++i) {
      tasks.push_back(std::async(std::launch::async, fit_one, i));
    }
    for (auto& t : tasks) t.get();
  } else {
    for (int i = 0; i < 8; ++i) fit_one(i);
  }

  if (diagnostics) {
    diagnostics->assign(diag.begin(), diag.end());
  }
  return registry;
}

namespace {

SplitSummary summarize(const std::vector<seq::Transaction>& txns, std::size_t begin,
                       std::size_t end) {
  SplitSummary s;
  s.rows = end - begin;
  for (std::size_t i = begin; i < end; ++i) s.frauds += txns[i].is_fraud ? 1 : 0;
  if (s.rows > 0) {
    s.first_timestamp = txns[begin].timestamp;
    s.last_timestamp = txns[end - 1].timestamp;
  }
  return s;
}

std::string sanitize_set_name(const std::string& name) {
  std::string out = name;
  std::replace(out.begin(), out.end(), '+', '_');
  return out;
}

void write_pr_curve_csv(const std::string& path, const rf::PrCurve& curve) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "recall,precision\n";
  for (const rf::PrPoint& p : curve.points) {
    out << io::format_double(p.recall) << ',' << io::format_double(p.precision)
        << "\n";
  }
}

nlohmann::ordered_json params_to_json(const rf::ForestParams& p) {
  return {{"n_trees", p.n_trees},
          {"max_depth", p.max_depth},
          {"min_samples_leaf", p.min_samples_leaf},
          {"mtry", p.mtry},
          {"bootstrap", p.bootstrap},
          {"seed", p.seed}};
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& config) {
  if (config.input_csv.empty() == !config.gen.has_value()) {
    throw std::invalid_argument("specify exactly one of input_csv or gen config");
  }
  if (config.window_size < 1 || config.n_states < 1) {
    throw std::invalid_argument("window_size and n_states must be >= 1");
  }
  if (config.feature_sets.empty()) {
    throw std::invalid_argument("no feature sets requested");
  }
  for (const std::string& set : config.feature_sets) feature_columns(set);

  std::vector<seq::Transaction> txns =
      config.gen ? synth::generate(*config.gen)
                 : io::read_transactions_csv(config.input_csv);
  std::sort(txns.begin(), txns.end(), [](const auto& a, const auto& b) {
    return a.timestamp != b.timestamp ? a.timestamp < b.timestamp
                                      : a.tx_id < b.tx_id;
  });

  const auto [a, b] = split_boundaries(txns, config.split_fractions);
  ExperimentReport report;
  report.rows = txns.size();
  report.train = summarize(txns, 0, a);
  report.valid = summarize(txns, a, b);
  report.test = summarize(txns, b, txns.size());

  for (const auto& [name, s] :
       {std::pair<const char*, const SplitSummary*>{"train", &report.train},
        {"valid", &report.valid},
        {"test", &report.test}}) {
    if (s->rows == 0) {
      report.warnings.push_back(std::string(name) + " split is empty");
    } else if (s->frauds == 0) {
      report.warnings.push_back(std::string(name) +
                                " split contains no fraudulent transactions");
    }
  }
  if (report.valid.frauds == 0 || report.test.frauds == 0) {
    throw std::runtime_error(
        "validation/test split contains no fraudulent transactions; PR "
        "evaluation is undefined (use more data or a higher fraud rate)");
  }

  const std::vector<seq::Transaction> train_txns(txns.begin(), txns.begin() + a);
  feat::ModelRegistry registry =
      train_registry(train_txns, config, &report.hmm_models, config.n_threads);

  const auto enriched = feat::enrich_dataset(txns, registry);
  const std::vector<feat::EnrichedTransaction> train_rows(enriched.begin(),
                                                          enriched.begin() + a);
  const std::vector<feat::EnrichedTransaction> valid_rows(enriched.begin() + a,
                                                          enriched.begin() + b);
  const std::vector<feat::EnrichedTransaction> test_rows(enriched.begin() + b,
                                                         enriched.end());

  Encoders encoders;
  {
    std::vector<std::string> countries, card_types;
    countries.reserve(train_rows.size());
    card_types.reserve(train_rows.size());
    for (const auto& r : train_rows) {
      countries.push_back(r.tx.country);
      card_types.push_back(r.tx.card_type);
    }
    encoders.country = CategoryEncoder::fit(countries);
    encoders.card_type = CategoryEncoder::fit(card_types);
  }

  std::vector<rf::RandomForest> forests;
  std::vector<rf::PrCurve> test_curves;
  for (std::size_t si = 0; si < config.feature_sets.size(); ++si) {
    const std::string& set_name = config.feature_sets[si];
    FeatureSetResult result;
    result.name = set_name;
    result.columns = feature_columns(set_name);

    const auto train_data = make_features(train_rows, result.columns, encoders);
    const auto valid_data = make_features(valid_rows, result.columns, encoders);
    const auto test_data = make_features(test_rows, result.columns, encoders);

    const std::uint64_t forest_seed =
        rng::derive_stream(config.seed, 100 + static_cast<std::uint64_t>(si));
    auto grid_result = rf::grid_search(train_data, valid_data, config.grid,
                                       forest_seed, true, config.n_threads);
    result.best_params = grid_result.best;
    for (const auto& point : grid_result.report) {
      result.validation_pr_auc =
          std::max(result.validation_pr_auc, point.validation_pr_auc);
    }
    result.grid_report = std::move(grid_result.report);

    rf::RandomForest forest = rf::fit_forest(train_data.x, train_data.y,
                                             result.best_params, result.columns,
                                             config.n_threads);
    const auto scores = rf::predict_all(forest, test_data.x, config.n_threads);
    rf::PrCurve curve = rf::pr_curve(scores, test_data.y);
    result.test_pr_auc = curve.auc;

    report.feature_sets.push_back(std::move(result));
    forests.push_back(std::move(forest));
    test_curves.push_back(std::move(curve));
  }

  const auto baseline_it =
      std::find_if(report.feature_sets.begin(), report.feature_sets.end(),
                   [](const auto& r) { return r.name == kBaselineFeatureSet; });
  if (baseline_it != report.feature_sets.end() && baseline_it->test_pr_auc > 0.0) {
    for (const auto& r : report.feature_sets) {
      report.relative_delta_vs_baseline[r.name] =
          (r.test_pr_auc - baseline_it->test_pr_auc) / baseline_it->test_pr_auc;
    }
  }

  if (!config.output_dir.empty()) {
    const fs::path dir(config.output_dir);
    fs::create_directories(dir / "models");
    for (int i = 0; i < 8; ++i) {
      const auto name = seq::Perspective::from_index(i).name();
      hmm::save_trained_model(registry.models[i],
                              (dir / "models" / ("hmm_" + name + ".json")).string());
    }
    save_encoders(encoders, (dir / "encoders.json").string());
    for (std::size_t si = 0; si < forests.size(); ++si) {
      const std::string stem = sanitize_set_name(config.feature_sets[si]);
      rf::save_forest(forests[si], (dir / ("forest_" + stem + ".json")).string());
      write_pr_curve_csv((dir / ("pr_curve_" + stem + ".csv")).string(),
                         test_curves[si]);
    }
    if (config.write_enriched) {
      feat::write_enriched_csv((dir / "enriched_train.csv").string(), train_rows);
      feat::write_enriched_csv((dir / "enriched_valid.csv").string(), valid_rows);
      feat::write_enriched_csv((dir / "enriched_test.csv").string(), test_rows);
    }
    {
      std::ofstream out(dir / "report.json");
      out << report_to_json(report, config).dump(2) << "\n";
    }
    {
      std::ofstream out(dir / "report.txt");
      out << report_table(report);
    }
  }
  return report;
}

nlohmann::ordered_json report_to_json(const ExperimentReport& report,
                                      const ExperimentConfig& config) {
  nlohmann::ordered_json j;
  j["format_version"] = 1;

  nlohmann::ordered_json cfg;
  cfg["seed"] = config.seed;
  if (!config.input_csv.empty()) cfg["input_csv"] = config.input_csv;
  if (config.gen) {
    const auto& g = *config.gen;
    cfg["gen"] = {{"n_cards", g.n_cards},
                  {"n_terminals", g.n_terminals},
                  {"n_days", g.n_days},
                  {"mean_txns_per_card_per_day", g.mean_txns_per_card_per_day},
                  {"fraud_card_fraction", g.fraud_card_fraction},
                  {"fraud_terminal_fraction", g.fraud_terminal_fraction},
                  {"target_fraud_rate", g.target_fraud_rate},
                  {"seed", g.seed}};
  }
  cfg["split_fractions"] = config.split_fractions;
  cfg["window_size"] = config.window_size;
  cfg["n_states"] = config.n_states;
  cfg["emission"] =
      config.emission_kind == hmm::EmissionKind::kGaussian ? "gaussian" : "categorical";
  if (config.emission_kind == hmm::EmissionKind::kCategorical) {
    cfg["n_bins"] = config.n_bins;
  }
  cfg["fit"] = {{"max_iterations", config.fit.max_iterations},
                {"convergence_tol", config.fit.convergence_tol},
                {"n_restarts", config.fit.n_restarts},
                {"variance_floor", config.fit.variance_floor},
                {"emission_floor", config.fit.emission_floor}};
  std::vector<std::string> mtry_rules;
  for (auto rule : config.grid.mtry) {
    mtry_rules.push_back(rule == rf::GridSpec::MtryRule::kSqrt ? "sqrt" : "third");
  }
  cfg["grid"] = {{"n_trees", config.grid.n_trees},
                 {"max_depth", config.grid.max_depth},
                 {"mtry", mtry_rules},
                 {"min_samples_leaf", config.grid.min_samples_leaf}};
  cfg["feature_sets"] = config.feature_sets;
  j["config"] = std::move(cfg);

  auto split_json = [](const SplitSummary& s) {
    return nlohmann::ordered_json{{"rows", s.rows},
                                  {"frauds", s.frauds},
                                  {"first_timestamp", s.first_timestamp},
                                  {"last_timestamp", s.last_timestamp}};
  };
  j["data"] = {{"rows", report.rows},
               {"train", split_json(report.train)},
               {"valid", split_json(report.valid)},
               {"test", split_json(report.test)}};

  nlohmann::ordered_json hmms = nlohmann::ordered_json::array();
  for (const auto& d : report.hmm_models) {
    hmms.push_back({{"perspective", d.perspective},
                    {"sequences", d.sequences},
                    {"observations", d.observations},
                    {"iterations", d.iterations},
                    {"converged", d.converged},
                    {"best_restart", d.best_restart},
                    {"final_log_likelihood", d.final_log_likelihood}});
  }
  j["hmm_models"] = std::move(hmms);

  nlohmann::ordered_json sets = nlohmann::ordered_json::array();
  for (const auto& r : report.feature_sets) {
    nlohmann::ordered_json grid = nlohmann::ordered_json::array();
    for (const auto& point : r.grid_report) {
      grid.push_back({{"params", params_to_json(point.params)},
                      {"validation_pr_auc", point.validation_pr_auc}});
    }
    sets.push_back({{"name", r.name},
                    {"columns", r.columns},
                    {"best_params", params_to_json(r.best_params)},
                    {"validation_pr_auc", r.validation_pr_auc},
                    {"test_pr_auc", r.test_pr_auc},
                    {"grid", std::move(grid)}});
  }
  j["feature_sets"] = std::move(sets);
  j["baseline"] = report.baseline;
  j["relative_pr_auc_delta_vs_baseline"] = report.relative_delta_vs_baseline;
  j["warnings"] = report.warnings;
  return j;
}

std::string report_table(const ExperimentReport& report) {
  std::ostringstream out;
  char line[256];
  out << "PR-AUC ablation (test split)\n";
  std::snprintf(line, sizeof(line), "%-24s %-34s %10s %10s %14s\n", "feature set",
                "best params", "valid", "test", "vs raw+aggCH");
  out << line;
  for (const auto& r : report.feature_sets) {
    char params[64];
    std::snprintf(params, sizeof(params), "trees=%d depth=%d mtry=%d leaf=%d",
                  r.best_params.n_trees, r.best_params.max_depth, r.best_params.mtry,
                  r.best_params.min_samples_leaf);
    std::string delta = "-";
    auto it = report.relative_delta_vs_baseline.find(r.name);
    if (it != report.relative_delta_vs_baseline.end()) {
      char d[32];
      std::snprintf(d, sizeof(d), "%+.1f%%", it->second * 100.0);
      delta = d;
    }
    std::snprintf(line, sizeof(line), "%-24s %-34s %10.6f %10.6f %14s\n",
                  r.name.c_str(), params, r.validation_pr_auc, r.test_pr_auc,
                  delta.c_str());
    out << line;
  }
  if (!report.warnings.empty()) {
    out << "warnings:\n";
    for (const auto& w : report.warnings) out << "  - " << w << "\n";
  }
  return out.str();
}

}  // namespace fraudml::pipe
