#include "fraudml/hmm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "fraudml/logprob.hpp"
#include "fraudml/rng.hpp"

namespace fraudml::hmm {

using num::kNegInf;

namespace {

constexpr double kHalfLog2Pi = 0.9189385332046727;  // 0.5 ln(2 pi)
constexpr double kRowSumTol = 1e-9;

double checked_symbol(double x, int n_symbols) {
  if (!(x >= 0.0) || x != std::floor(x) || x >= static_cast<double>(n_symbols)) {
    throw std::domain_error("observation is not a symbol index in [0, " +
                            std::to_string(n_symbols) + ")");
  }
  return x;
}

void check_row_stochastic(const double* row, int n, const char* what) {
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    double p = row[i];
    if (!(p >= 0.0) || p > 1.0 + kRowSumTol || !std::isfinite(p)) {
      throw std::invalid_argument(std::string(what) + ": probability out of [0, 1]");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kRowSumTol) {
    throw std::invalid_argument(std::string(what) + ": row does not sum to 1");
  }
}

}  // namespace

void HiddenMarkovModel::finalize() {
  const int k = n_states;
  log_initial.resize(k);
  log_transition.resize(static_cast<std::size_t>(k) * k);
  for (int i = 0; i < k; ++i) log_initial[i] = std::log(initial[i]);
  for (std::size_t i = 0; i < log_transition.size(); ++i) {
    log_transition[i] = std::log(transition[i]);
  }
  if (emissions.kind == EmissionKind::kGaussian) {
    gauss_neg_half_inv_var.resize(k);
    gauss_log_norm.resize(k);
    for (int i = 0; i < k; ++i) {
      gauss_neg_half_inv_var[i] = -0.5 / emissions.variances[i];
      gauss_log_norm[i] = -kHalfLog2Pi - 0.5 * std::log(emissions.variances[i]);
    }
    log_emission.clear();
  } else {
    log_emission.resize(emissions.emission.size());
    for (std::size_t i = 0; i < log_emission.size(); ++i) {
      log_emission[i] = std::log(emissions.emission[i]);
    }
    gauss_neg_half_inv_var.clear();
    gauss_log_norm.clear();
  }
}

void HiddenMarkovModel::validate() const {
  const int k = n_states;
  if (k < 1) throw std::invalid_argument("hmm: n_states must be >= 1");
  if (static_cast<int>(initial.size()) != k ||
      transition.size() != static_cast<std::size_t>(k) * k) {
    throw std::invalid_argument("hmm: parameter shapes do not match n_states");
  }
  check_row_stochastic(initial.data(), k, "hmm initial");
  for (int i = 0; i < k; ++i) {
    check_row_stochastic(transition.data() + static_cast<std::size_t>(i) * k, k,
                         "hmm transition");
  }
  if (emissions.kind == EmissionKind::kGaussian) {
    if (static_cast<int>(emissions.means.size()) != k ||
        static_cast<int>(emissions.variances.size()) != k) {
      throw std::invalid_argument("hmm: Gaussian emission shapes do not match n_states");
    }
    for (int i = 0; i < k; ++i) {
      if (!std::isfinite(emissions.means[i])) {
        throw std::invalid_argument("hmm: non-finite Gaussian mean");
      }
      if (!(emissions.variances[i] > 0.0) || !std::isfinite(emissions.variances[i])) {
        throw std::invalid_argument("hmm: Gaussian variance must be positive");
      }
    }
  } else {
    if (emissions.n_symbols < 2) {
      throw std::invalid_argument("hmm: categorical emissions need n_symbols >= 2");
    }
    if (emissions.emission.size() !=
        static_cast<std::size_t>(k) * emissions.n_symbols) {
      throw std::invalid_argument("hmm: categorical emission shape mismatch");
    }
    for (int i = 0; i < k; ++i) {
      check_row_stochastic(emissions.emission.data() +
                               static_cast<std::size_t>(i) * emissions.n_symbols,
                           emissions.n_symbols, "hmm emission");
    }
  }
}

double HiddenMarkovModel::emission_log_prob(int state, double x) const {
  if (emissions.kind == EmissionKind::kGaussian) {
    const double d = x - emissions.means[state];
    return gauss_log_norm[state] + gauss_neg_half_inv_var[state] * d * d;
  }
  return log_emission[static_cast<std::size_t>(state) * emissions.n_symbols +
                      static_cast<int>(x)];
}

double log_likelihood(const HiddenMarkovModel& model, const ObservationSequence& seq) {
  if (seq.empty()) throw std::invalid_argument("empty sequence");
  const int k = model.n_states;
  const bool categorical = model.emissions.kind == EmissionKind::kCategorical;
  for (double x : seq) {
    if (categorical) {
      checked_symbol(x, model.emissions.n_symbols);
    } else if (!std::isfinite(x)) {
      throw std::domain_error("non-finite observation");
    }
  }

  std::vector<double> cur(k), nxt(k), terms(k);
  for (int j = 0; j < k; ++j) {
    cur[j] = model.log_initial[j] + model.emission_log_prob(j, seq[0]);
  }
  for (std::size_t t = 1; t < seq.size(); ++t) {
    for (int j = 0; j < k; ++j) {
      for (int i = 0; i < k; ++i) {
        terms[i] = cur[i] + model.log_transition[static_cast<std::size_t>(i) * k + j];
      }
      nxt[j] = num::log_sum_exp(terms) + model.emission_log_prob(j, seq[t]);
    }
    std::swap(cur, nxt);
  }
  return num::log_sum_exp(cur);
}

namespace {

// Sufficient statistics accumulated by one E-step over the corpus.
struct EStepStats {
  double log_likelihood = 0.0;
  std::vector<double> initial;      // K
  std::vector<double> transition;   // K x K (xi sums)
  std::vector<double> weight;       // K (gamma sums over all t)
  std::vector<double> wx;           // K (gamma-weighted observations)
  std::vector<double> wx2;          // K (gamma-weighted squares)
  std::vector<double> symbol;       // K x M (gamma sums per symbol)

  void reset(int k, int m) {
    log_likelihood = 0.0;
    initial.assign(k, 0.0);
    transition.assign(static_cast<std::size_t>(k) * k, 0.0);
    weight.assign(k, 0.0);
    wx.assign(k, 0.0);
    wx2.assign(k, 0.0);
    symbol.assign(static_cast<std::size_t>(k) * m, 0.0);
  }
};

// Scratch buffers reused across sequences and iterations.
struct FbWorkspace {
  std::vector<double> b;      // T x K linear emission probabilities
  std::vector<double> alpha;  // T x K scaled forward variables
  std::vector<double> scale;  // T
  std::vector<double> beta_next, beta_cur;  // K
};

// Scaled forward-backward for one sequence; accumulates into `st`.
void accumulate_sequence(const HiddenMarkovModel& model, const ObservationSequence& seq,
                         FbWorkspace& ws, EStepStats& st) {
  const int k = model.n_states;
  const std::size_t t_len = seq.size();
  const bool categorical = model.emissions.kind == EmissionKind::kCategorical;
  ws.b.resize(t_len * k);
  ws.alpha.resize(t_len * k);
  ws.scale.resize(t_len);
  ws.beta_next.assign(k, 1.0);
  ws.beta_cur.assign(k, 1.0);

  for (std::size_t t = 0; t < t_len; ++t) {
    double* row = ws.b.data() + t * k;
    if (categorical) {
      const int sym = static_cast<int>(seq[t]);
      for (int j = 0; j < k; ++j) {
        row[j] = model.emissions.emission[static_cast<std::size_t>(j) *
                                              model.emissions.n_symbols +
                                          sym];
      }
    } else {
      for (int j = 0; j < k; ++j) {
        const double d = seq[t] - model.emissions.means[j];
        row[j] = std::exp(model.gauss_log_norm[j] +
                          model.gauss_neg_half_inv_var[j] * d * d);
      }
    }
  }

  // Forward with per-step normalization.
  double* a0 = ws.alpha.data();
  double c = 0.0;
  for (int j = 0; j < k; ++j) {
    a0[j] = model.initial[j] * ws.b[j];
    c += a0[j];
  }
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw std::domain_error("sequence has zero probability under the model");
  }
  ws.scale[0] = c;
  for (int j = 0; j < k; ++j) a0[j] /= c;
  for (std::size_t t = 1; t < t_len; ++t) {
    const double* prev = ws.alpha.data() + (t - 1) * k;
    double* curr = ws.alpha.data() + t * k;
    const double* bt = ws.b.data() + t * k;
    c = 0.0;
    for (int j = 0; j < k; ++j) {
      double s = 0.0;
      for (int i = 0; i < k; ++i) {
        s += prev[i] * model.transition[static_cast<std::size_t>(i) * k + j];
      }
      curr[j] = s * bt[j];
      c += curr[j];
    }
    if (!(c > 0.0) || !std::isfinite(c)) {
      throw std::domain_error("sequence has zero probability under the model");
    }
    ws.scale[t] = c;
    for (int j = 0; j < k; ++j) curr[j] /= c;
  }
  for (std::size_t t = 0; t < t_len; ++t) st.log_likelihood += std::log(ws.scale[t]);

  // Backward, accumulating gamma and xi on the fly.
  auto add_emission_stats = [&](std::size_t t, const double* gamma) {
    if (categorical) {
      const int sym = static_cast<int>(seq[t]);
      for (int j = 0; j < k; ++j) {
        st.weight[j] += gamma[j];
        st.symbol[static_cast<std::size_t>(j) * model.emissions.n_symbols + sym] +=
            gamma[j];
      }
    } else {
      const double x = seq[t];
      for (int j = 0; j < k; ++j) {
        st.weight[j] += gamma[j];
        st.wx[j] += gamma[j] * x;
        st.wx2[j] += gamma[j] * x * x;
      }
    }
  };

  std::vector<double> gamma(k);
  const double* alast = ws.alpha.data() + (t_len - 1) * k;
  for (int j = 0; j < k; ++j) gamma[j] = alast[j];  // beta_hat[T-1] = 1
  add_emission_stats(t_len - 1, gamma.data());

  for (std::size_t ti = t_len - 1; ti-- > 0;) {
    const double* at = ws.alpha.data() + ti * k;
    const double* bn = ws.b.data() + (ti + 1) * k;
    const double inv_c = 1.0 / ws.scale[ti + 1];
    for (int i = 0; i < k; ++i) {
      double sum = 0.0;
      const double* arow = model.transition.data() + static_cast<std::size_t>(i) * k;
      for (int j = 0; j < k; ++j) {
        const double term = arow[j] * bn[j] * ws.beta_next[j];
        st.transition[static_cast<std::size_t>(i) * k + j] += at[i] * term * inv_c;
        sum += term;
      }
      ws.beta_cur[i] = sum * inv_c;
      gamma[i] = at[i] * ws.beta_cur[i];
    }
    add_emission_stats(ti, gamma.data());
    std::swap(ws.beta_next, ws.beta_cur);
  }
  for (int j = 0; j < k; ++j) st.initial[j] += ws.alpha[j] * ws.beta_next[j];
}

// Exact maximizer of sum_m c_m log p_m over {p >= floor, sum p = 1}.
// Clamps low-count symbols to the floor and redistributes the remainder.
void normalize_with_floor(double* row, const double* counts, int m, double floor_value) {
  std::vector<bool> clamped(m, false);
  for (;;) {
    double total = 0.0;
    int n_clamped = 0;
    for (int i = 0; i < m; ++i) {
      if (clamped[i]) {
        ++n_clamped;
      } else {
        total += counts[i];
      }
    }
    const double budget = 1.0 - floor_value * n_clamped;
    bool changed = false;
    for (int i = 0; i < m; ++i) {
      if (clamped[i]) {
        row[i] = floor_value;
        continue;
      }
      row[i] = total > 0.0 ? counts[i] * budget / total : budget / (m - n_clamped);
      if (row[i] < floor_value) {
        clamped[i] = true;
        changed = true;
      }
    }
    if (!changed) break;
  }
  double sum = 0.0;
  for (int i = 0; i < m; ++i) sum += row[i];
  for (int i = 0; i < m; ++i) row[i] /= sum;
}

void m_step(HiddenMarkovModel& model, const EStepStats& st, const FitConfig& config) {
  const int k = model.n_states;
  double init_sum = std::accumulate(st.initial.begin(), st.initial.end(), 0.0);
  if (init_sum > 0.0) {
    for (int j = 0; j < k; ++j) model.initial[j] = st.initial[j] / init_sum;
  }
  for (int i = 0; i < k; ++i) {
    double* row = model.transition.data() + static_cast<std::size_t>(i) * k;
    const double* xi = st.transition.data() + static_cast<std::size_t>(i) * k;
    double row_sum = 0.0;
    for (int j = 0; j < k; ++j) row_sum += xi[j];
    if (row_sum > 0.0) {
      for (int j = 0; j < k; ++j) row[j] = xi[j] / row_sum;
    }
    // else: state unoccupied before the last step; keep the previous row.
  }
  if (model.emissions.kind == EmissionKind::kGaussian) {
    for (int j = 0; j < k; ++j) {
      if (st.weight[j] > 0.0) {
        const double mean = st.wx[j] / st.weight[j];
        double var = st.wx2[j] / st.weight[j] - mean * mean;
        model.emissions.means[j] = mean;
        model.emissions.variances[j] = std::max(var, config.variance_floor);
      }
    }
  } else {
    const int m = model.emissions.n_symbols;
    for (int j = 0; j < k; ++j) {
      if (st.weight[j] > 0.0) {
        normalize_with_floor(
            model.emissions.emission.data() + static_cast<std::size_t>(j) * m,
            st.symbol.data() + static_cast<std::size_t>(j) * m, m,
            config.emission_floor);
      }
    }
  }
  model.finalize();
}

HiddenMarkovModel init_restart(int n_states, const FitConfig& config, int restart,
                               const std::vector<double>& sorted_values,
                               double global_var,
                               const std::vector<double>& symbol_freq, int n_symbols) {
  rng::CounterRng gen(config.seed, static_cast<std::uint64_t>(restart));
  const int k = n_states;
  HiddenMarkovModel model;
  model.n_states = k;
  model.initial.resize(k);
  model.transition.resize(static_cast<std::size_t>(k) * k);

  double sum = 0.0;
  for (int j = 0; j < k; ++j) {
    model.initial[j] = 1.0 + 0.5 * gen.next_unit();
    sum += model.initial[j];
  }
  for (int j = 0; j < k; ++j) model.initial[j] /= sum;
  for (int i = 0; i < k; ++i) {
    double* row = model.transition.data() + static_cast<std::size_t>(i) * k;
    double row_sum = 0.0;
    for (int j = 0; j < k; ++j) {
      row[j] = 1.0 + 0.5 * gen.next_unit();
      row_sum += row[j];
    }
    for (int j = 0; j < k; ++j) row[j] /= row_sum;
  }

  model.emissions.kind = config.emission_kind;
  if (config.emission_kind == EmissionKind::kGaussian) {
    model.emissions.means.resize(k);
    model.emissions.variances.resize(k);
    const std::size_t n = sorted_values.size();
    const double stddev = std::sqrt(global_var);
    for (int j = 0; j < k; ++j) {
      // Means seeded from spread quantiles of the pooled data, jittered so
      // restarts explore different basins.
      const double q = static_cast<double>(j + 1) / (k + 1);
      const std::size_t idx =
          std::min(n - 1, static_cast<std::size_t>(q * static_cast<double>(n - 1) + 0.5));
      model.emissions.means[j] = sorted_values[idx] + 0.1 * stddev * gen.next_normal();
      model.emissions.variances[j] = std::max(global_var, config.variance_floor);
    }
  } else {
    model.emissions.n_symbols = n_symbols;
    model.emissions.emission.resize(static_cast<std::size_t>(k) * n_symbols);
    for (int j = 0; j < k; ++j) {
      double* row = model.emissions.emission.data() + static_cast<std::size_t>(j) * n_symbols;
      double row_sum = 0.0;
      for (int m = 0; m < n_symbols; ++m) {
        row[m] = symbol_freq[m] * (0.5 + gen.next_unit());
        row_sum += row[m];
      }
      for (int m = 0; m < n_symbols; ++m) row[m] /= row_sum;
    }
  }
  model.finalize();
  return model;
}

}  // namespace

FitResult fit_baum_welch(const std::vector<ObservationSequence>& corpus, int n_states,
                         const FitConfig& config) {
  if (corpus.empty()) throw std::invalid_argument("empty corpus");
  if (n_states < 1) throw std::invalid_argument("n_states must be >= 1");
  if (config.max_iterations < 1 || config.n_restarts < 1 ||
      !(config.convergence_tol > 0.0) || !(config.variance_floor > 0.0)) {
    throw std::invalid_argument("invalid fit config");
  }

  std::size_t total = 0;
  for (const auto& seq : corpus) {
    if (seq.empty()) throw std::invalid_argument("empty sequence in corpus");
    total += seq.size();
  }

  int n_symbols = config.n_symbols;
  std::vector<double> sorted_values;
  std::vector<double> symbol_freq;
  double global_var = 0.0;
  if (config.emission_kind == EmissionKind::kGaussian) {
    sorted_values.reserve(total);
    for (const auto& seq : corpus) {
      for (double x : seq) {
        if (!std::isfinite(x)) throw std::domain_error("non-finite observation in corpus");
        sorted_values.push_back(x);
      }
    }
    std::sort(sorted_values.begin(), sorted_values.end());
    double mean = std::accumulate(sorted_values.begin(), sorted_values.end(), 0.0) /
                  static_cast<double>(total);
    for (double x : sorted_values) global_var += (x - mean) * (x - mean);
    global_var /= static_cast<double>(total);
  } else {
    double max_sym = -1.0;
    for (const auto& seq : corpus) {
      for (double x : seq) {
        if (!(x >= 0.0) || x != std::floor(x)) {
          throw std::domain_error("categorical corpus contains a non-symbol value");
        }
        max_sym = std::max(max_sym, x);
      }
    }
    if (n_symbols == 0) n_symbols = std::max(2, static_cast<int>(max_sym) + 1);
    if (max_sym >= static_cast<double>(n_symbols)) {
      throw std::domain_error("categorical corpus contains out-of-range symbols");
    }
    symbol_freq.assign(n_symbols, 0.0);
    for (const auto& seq : corpus) {
      for (double x : seq) symbol_freq[static_cast<int>(x)] += 1.0;
    }
    // Add-one smoothing so every symbol starts with positive mass.
    for (double& f : symbol_freq) f = (f + 1.0) / (static_cast<double>(total) + n_symbols);
  }

  FitResult best;
  double best_ll = kNegInf;
  bool have_best = false;
  FbWorkspace ws;
  EStepStats stats;

  for (int restart = 0; restart < config.n_restarts; ++restart) {
    HiddenMarkovModel model = init_restart(n_states, config, restart, sorted_values,
                                           global_var, symbol_freq, n_symbols);
    std::vector<double> trace;
    trace.reserve(config.max_iterations + 1);
    bool converged = false;
    double prev_ll = kNegInf;
    // The loop evaluates the corpus LL once more than it applies M-steps, so
    // the last trace entry is always the likelihood of the returned model.
    for (int iter = 0; iter <= config.max_iterations; ++iter) {
      stats.reset(n_states, model.emissions.kind == EmissionKind::kCategorical
                                ? model.emissions.n_symbols
                                : 0);
      for (const auto& seq : corpus) accumulate_sequence(model, seq, ws, stats);
      trace.push_back(stats.log_likelihood);
      if (iter > 0 && stats.log_likelihood - prev_ll <
                          config.convergence_tol * std::max(1.0, std::abs(prev_ll))) {
        converged = true;
        break;
      }
      if (iter == config.max_iterations) break;
      prev_ll = stats.log_likelihood;
      m_step(model, stats, config);
      model.validate();
    }
    if (!have_best || trace.back() > best_ll) {
      have_best = true;
      best_ll = trace.back();
      best.model = std::move(model);
      best.log_likelihood_trace = std::move(trace);
      best.iterations = static_cast<int>(best.log_likelihood_trace.size()) - 1;
      best.converged = converged;
      best.best_restart = restart;
      best.final_log_likelihood = best_ll;
    }
  }
  return best;
}

ObservationSequence sample(const HiddenMarkovModel& model, std::size_t length,
                           std::uint64_t seed) {
  model.validate();
  ObservationSequence out;
  if (length == 0) return out;
  out.reserve(length);
  rng::CounterRng gen(seed, 0);
  const int k = model.n_states;

  auto pick = [&](const double* probs, int n) {
    const double u = gen.next_unit();
    double cum = 0.0;
    int last_positive = 0;
    for (int i = 0; i < n; ++i) {
      if (probs[i] > 0.0) last_positive = i;
      cum += probs[i];
      if (u < cum) return i;
    }
    return last_positive;  // guard against round-off at the top of the scan
  };

  auto emit = [&](int state) {
    if (model.emissions.kind == EmissionKind::kGaussian) {
      return model.emissions.means[state] +
             std::sqrt(model.emissions.variances[state]) * gen.next_normal();
    }
    const double* row =
        model.emissions.emission.data() +
        static_cast<std::size_t>(state) * model.emissions.n_symbols;
    return static_cast<double>(pick(row, model.emissions.n_symbols));
  };

  int state = pick(model.initial.data(), k);
  out.push_back(emit(state));
  for (std::size_t t = 1; t < length; ++t) {
    state = pick(model.transition.data() + static_cast<std::size_t>(state) * k, k);
    out.push_back(emit(state));
  }
  return out;
}

QuantileBinner QuantileBinner::fit(const std::vector<ObservationSequence>& corpus,
                                   int max_bins) {
  if (max_bins < 2) throw std::invalid_argument("quantile binner needs >= 2 bins");
  std::vector<double> values;
  for (const auto& seq : corpus) values.insert(values.end(), seq.begin(), seq.end());
  if (values.empty()) throw std::invalid_argument("quantile binner: empty corpus");
  std::sort(values.begin(), values.end());

  QuantileBinner binner;
  const std::size_t n = values.size();
  for (int b = 1; b < max_bins; ++b) {
    binner.edges.push_back(values[n * static_cast<std::size_t>(b) / max_bins]);
  }
  binner.edges.erase(std::unique(binner.edges.begin(), binner.edges.end()),
                     binner.edges.end());
  if (binner.edges.empty()) {
    // Degenerate (constant) corpus: keep a 2-symbol alphabet.
    binner.edges.push_back(values.back() + 1.0);
  }
  return binner;
}

int QuantileBinner::bin(double x) const {
  return static_cast<int>(std::upper_bound(edges.begin(), edges.end(), x) -
                          edges.begin());
}

ObservationSequence QuantileBinner::apply(const ObservationSequence& seq) const {
  ObservationSequence out;
  out.reserve(seq.size());
  for (double x : seq) out.push_back(static_cast<double>(bin(x)));
  return out;
}

double TrainedModel::score(const ObservationSequence& window) const {
  if (bin_edges.empty()) return log_likelihood(model, window);
  QuantileBinner binner{bin_edges};
  return log_likelihood(model, binner.apply(window));
}

nlohmann::ordered_json trained_model_to_json(const TrainedModel& tm) {
  const auto& m = tm.model;
  nlohmann::ordered_json j;
  j["format_version"] = 1;
  j["kind"] = m.emissions.kind == EmissionKind::kGaussian ? "gaussian" : "categorical";
  j["n_states"] = m.n_states;
  j["initial"] = m.initial;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (int i = 0; i < m.n_states; ++i) {
    rows.push_back(std::vector<double>(
        m.transition.begin() + static_cast<std::size_t>(i) * m.n_states,
        m.transition.begin() + static_cast<std::size_t>(i + 1) * m.n_states));
  }
  j["transition"] = std::move(rows);
  if (m.emissions.kind == EmissionKind::kGaussian) {
    j["emissions"] = {{"means", m.emissions.means},
                      {"variances", m.emissions.variances}};
  } else {
    nlohmann::ordered_json erows = nlohmann::ordered_json::array();
    for (int i = 0; i < m.n_states; ++i) {
      erows.push_back(std::vector<double>(
          m.emissions.emission.begin() +
              static_cast<std::size_t>(i) * m.emissions.n_symbols,
          m.emissions.emission.begin() +
              static_cast<std::size_t>(i + 1) * m.emissions.n_symbols));
    }
    j["emissions"] = {{"n_symbols", m.emissions.n_symbols},
                      {"probabilities", std::move(erows)}};
  }
  j["signal_transform"] = tm.signal_transform;
  if (!tm.bin_edges.empty()) j["bin_edges"] = tm.bin_edges;
  return j;
}

TrainedModel trained_model_from_json(const nlohmann::json& j) {
  if (j.at("format_version").get<int>() != 1) {
    throw std::runtime_error("unsupported model format_version");
  }
  TrainedModel tm;
  HiddenMarkovModel& m = tm.model;
  m.n_states = j.at("n_states").get<int>();
  m.initial = j.at("initial").get<std::vector<double>>();
  for (const auto& row : j.at("transition")) {
    auto values = row.get<std::vector<double>>();
    m.transition.insert(m.transition.end(), values.begin(), values.end());
  }
  const std::string kind = j.at("kind").get<std::string>();
  const auto& em = j.at("emissions");
  if (kind == "gaussian") {
    m.emissions.kind = EmissionKind::kGaussian;
    m.emissions.means = em.at("means").get<std::vector<double>>();
    m.emissions.variances = em.at("variances").get<std::vector<double>>();
  } else if (kind == "categorical") {
    m.emissions.kind = EmissionKind::kCategorical;
    m.emissions.n_symbols = em.at("n_symbols").get<int>();
    for (const auto& row : em.at("probabilities")) {
      auto values = row.get<std::vector<double>>();
      m.emissions.emission.insert(m.emissions.emission.end(), values.begin(),
                                  values.end());
    }
  } else {
    throw std::runtime_error("unknown emission kind: " + kind);
  }
  tm.signal_transform = j.at("signal_transform").get<std::string>();
  if (j.contains("bin_edges")) {
    tm.bin_edges = j.at("bin_edges").get<std::vector<double>>();
  }
  m.validate();
  m.finalize();
  return tm;
}

void save_trained_model(const TrainedModel& tm, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << trained_model_to_json(tm).dump(2) << "\n";
}

TrainedModel load_trained_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  nlohmann::json j;
  in >> j;
  return trained_model_from_json(j);
}

}  // namespace fraudml::hmm
