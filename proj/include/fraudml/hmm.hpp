#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace fraudml::hmm {

enum class EmissionKind { kGaussian, kCategorical };

// Observations are plain doubles: transformed signal values in Gaussian
// mode, integral symbol indices in [0, n_symbols) in Categorical mode.
using ObservationSequence = std::vector<double>;

struct EmissionParams {
  EmissionKind kind = EmissionKind::kGaussian;

  // Gaussian: one component per state.
  std::vector<double> means;
  std::vector<double> variances;

  // Categorical: K x n_symbols row-stochastic matrix, row-major.
  int n_symbols = 0;
  std::vector<double> emission;
};

// K-state hidden Markov model.
//
// Linear-space probabilities (`initial`, `transition`, emission rows) are the
// canonical parameters and exactly what gets serialized, so a save/load round
// trip restores scoring behavior bit-for-bit.  The log-space views used by
// the forward algorithm are derived once by finalize(); exact zeros become
// -inf there.
struct HiddenMarkovModel {
  int n_states = 0;
  std::vector<double> initial;     // K
  std::vector<double> transition;  // K x K, row-major, row = source state
  EmissionParams emissions;

  // Derived by finalize(); do not fill by hand.
  std::vector<double> log_initial;
  std::vector<double> log_transition;
  std::vector<double> log_emission;    // categorical only
  std::vector<double> gauss_neg_half_inv_var;  // -1 / (2 var_k)
  std::vector<double> gauss_log_norm;          // -0.5 ln(2 pi var_k)

  // Rebuilds the log-space views from the linear parameters.
  void finalize();

  // Checks the stochasticity invariants (rows sum to 1 within 1e-9,
  // entries in [0, 1], Gaussian variances positive). Throws
  // std::invalid_argument on violation.
  void validate() const;

  // Emission log-density (Gaussian) or log-mass (Categorical) of value x
  // under state k. Requires finalize().
  double emission_log_prob(int state, double x) const;
};

struct FitConfig {
  int max_iterations = 100;
  double convergence_tol = 1e-6;  // relative log-likelihood improvement
  int n_restarts = 5;
  std::uint64_t seed = 0;
  double variance_floor = 1e-6;   // Gaussian M-step clamp
  double emission_floor = 1e-12;  // Categorical M-step clamp (keeps scores finite)
  EmissionKind emission_kind = EmissionKind::kGaussian;
  int n_symbols = 0;  // Categorical alphabet size; 0 = max observed symbol + 1
};

struct FitResult {
  HiddenMarkovModel model;
  // Corpus log-likelihood before each M-step of the winning restart;
  // the last entry is the log-likelihood of the returned model.
  std::vector<double> log_likelihood_trace;
  int iterations = 0;
  bool converged = false;
  int best_restart = 0;
  double final_log_likelihood = 0.0;
};

// log p(seq | model) via the forward algorithm in log space.
// Throws std::invalid_argument on an empty sequence and std::domain_error on
// observations that do not match the emission kind (non-finite values,
// non-integral or out-of-range symbols).
double log_likelihood(const HiddenMarkovModel& model, const ObservationSequence& seq);

// Baum-Welch EM with multi-restart; returns the best restart by final corpus
// log-likelihood (ties broken by lowest restart index). Deterministic given
// (corpus order, config.seed); restarts use independent RNG streams keyed by
// restart index, so parallel and serial execution agree.
FitResult fit_baum_welch(const std::vector<ObservationSequence>& corpus, int n_states,
                         const FitConfig& config);

// Draws a length-`length` sequence; deterministic for a given seed.
ObservationSequence sample(const HiddenMarkovModel& model, std::size_t length,
                           std::uint64_t seed);

// Maps a continuous signal onto symbol indices using training-corpus
// quantile edges. bin(x) = number of edges <= x.
struct QuantileBinner {
  std::vector<double> edges;  // strictly increasing interior cut points

  static QuantileBinner fit(const std::vector<ObservationSequence>& corpus, int max_bins);

  int n_symbols() const { return static_cast<int>(edges.size()) + 1; }
  int bin(double x) const;
  ObservationSequence apply(const ObservationSequence& seq) const;
};

// A fitted model plus the signal conventions needed to score raw windows:
// the upstream transform tag and, in categorical mode, the bin edges.
struct TrainedModel {
  HiddenMarkovModel model;
  std::string signal_transform = "log1p";
  std::vector<double> bin_edges;  // non-empty iff categorical

  // Scores a window of transformed signal values, binning first when
  // categorical. Returns log-likelihood (not length-normalized).
  double score(const ObservationSequence& window) const;
};

nlohmann::ordered_json trained_model_to_json(const TrainedModel& tm);
TrainedModel trained_model_from_json(const nlohmann::json& j);  // re-validates invariants

void save_trained_model(const TrainedModel& tm, const std::string& path);
TrainedModel load_trained_model(const std::string& path);

}  // namespace fraudml::hmm
