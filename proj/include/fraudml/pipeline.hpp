#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "fraudml/features.hpp"
#include "fraudml/forest.hpp"
#include "fraudml/hmm.hpp"
#include "fraudml/sequencer.hpp"
#include "fraudml/synthgen.hpp"

namespace fraudml::pipe {

// The ablation feature sets, in reporting order. "raw+aggCH" is the baseline
// the relative deltas are computed against.
const std::vector<std::string>& default_feature_sets();
inline constexpr const char* kBaselineFeatureSet = "raw+aggCH";

// Expands a set name ("raw+aggCH+HMM") into its ordered column list.
// Throws std::invalid_argument on unknown group names.
std::vector<std::string> feature_columns(const std::string& set_name);

struct ExperimentConfig {
  std::string input_csv;                  // read transactions from file...
  std::optional<synth::GenConfig> gen;    // ...or generate them
  std::array<double, 3> split_fractions{0.6, 0.2, 0.2};
  int window_size = 3;
  int n_states = 5;
  hmm::EmissionKind emission_kind = hmm::EmissionKind::kGaussian;
  int n_bins = 30;  // categorical emission mode only
  hmm::FitConfig fit;
  rf::GridSpec grid;
  std::vector<std::string> feature_sets = default_feature_sets();
  std::string output_dir;  // empty = keep everything in memory
  std::uint64_t seed = 0;
  int n_threads = 0;  // 0 = hardware; never affects results
  bool write_enriched = true;
};

struct SplitSummary {
  std::size_t rows = 0;
  std::size_t frauds = 0;
  std::int64_t first_timestamp = 0;
  std::int64_t last_timestamp = 0;
};

struct HmmDiagnostics {
  std::string perspective;
  std::size_t sequences = 0;
  std::size_t observations = 0;
  int iterations = 0;
  bool converged = false;
  int best_restart = 0;
  double final_log_likelihood = 0.0;
};

struct FeatureSetResult {
  std::string name;
  std::vector<std::string> columns;
  rf::ForestParams best_params;
  double validation_pr_auc = 0.0;
  double test_pr_auc = 0.0;
  std::vector<rf::GridPointResult> grid_report;
};

struct ExperimentReport {
  std::size_t rows = 0;
  SplitSummary train, valid, test;
  std::vector<HmmDiagnostics> hmm_models;
  std::vector<FeatureSetResult> feature_sets;
  std::string baseline = kBaselineFeatureSet;
  // test PR-AUC relative to the baseline set, when the baseline was run.
  std::map<std::string, double> relative_delta_vs_baseline;
  std::vector<std::string> warnings;
};

// Contiguous temporal split at the empirical time quantiles of the
// fractions. Transactions whose timestamp ties a boundary stay on the left.
// Requires txns sorted by (timestamp, tx_id); fractions positive, summing
// to 1. Returns (a, b): train = [0, a), valid = [a, b), test = [b, n).
std::pair<std::size_t, std::size_t> split_boundaries(
    const std::vector<seq::Transaction>& txns, const std::array<double, 3>& fractions);

std::tuple<std::vector<seq::Transaction>, std::vector<seq::Transaction>,
           std::vector<seq::Transaction>>
temporal_split(const std::vector<seq::Transaction>& txns,
               const std::array<double, 3>& fractions);

// Stable integer codes from a training vocabulary; unseen values map to 0.
struct CategoryEncoder {
  std::map<std::string, int> codes;  // 1-based, assigned in sorted order

  static CategoryEncoder fit(const std::vector<std::string>& values);
  int encode(const std::string& value) const {
    auto it = codes.find(value);
    return it == codes.end() ? 0 : it->second;
  }
};

struct Encoders {
  CategoryEncoder country;
  CategoryEncoder card_type;
};

nlohmann::ordered_json encoders_to_json(const Encoders& enc);
Encoders encoders_from_json(const nlohmann::json& j);
void save_encoders(const Encoders& enc, const std::string& path);
Encoders load_encoders(const std::string& path);

// Builds the feature matrix for the given columns over enriched rows.
rf::LabeledData make_features(const std::vector<feat::EnrichedTransaction>& rows,
                              const std::vector<std::string>& columns,
                              const Encoders& encoders);

// Trains the eight perspective models on the training transactions.
// Throws std::runtime_error naming the perspective when a corpus is empty.
feat::ModelRegistry train_registry(const std::vector<seq::Transaction>& train_txns,
                                   const ExperimentConfig& config,
                                   std::vector<HmmDiagnostics>* diagnostics,
                                   int n_threads);

// Full protocol: ingest/generate, temporal split, train the eight HMMs on
// the training split, enrich everything with no lookahead, grid-search each
// feature set on validation, refit on train, evaluate PR-AUC on test.
// Writes report/models/forests/curves under config.output_dir when set.
// Deterministic given the master seed, independent of n_threads.
ExperimentReport run_experiment(const ExperimentConfig& config);

nlohmann::ordered_json report_to_json(const ExperimentReport& report,
                                      const ExperimentConfig& config);
std::string report_table(const ExperimentReport& report);

}  // namespace fraudml::pipe
