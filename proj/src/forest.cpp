#include "fraudml/forest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "fraudml/metrics.hpp"
#include "fraudml/parallel.hpp"
#include "fraudml/rng.hpp"

namespace fraudml::rf {

namespace {

// Per-feature sample orderings shared by every tree of a fit.
struct Presorted {
  std::vector<std::vector<std::uint32_t>> order;  // ascending by (value, index)
  std::vector<std::vector<double>> value;         // values in that order
};

Presorted presort(const FeatureMatrix& x) {
  Presorted pre;
  pre.order.resize(x.cols);
  pre.value.resize(x.cols);
  for (std::size_t f = 0; f < x.cols; ++f) {
    auto& ord = pre.order[f];
    ord.resize(x.rows);
    std::iota(ord.begin(), ord.end(), 0u);
    std::sort(ord.begin(), ord.end(), [&](std::uint32_t a, std::uint32_t b) {
      const double va = x.at(a, f), vb = x.at(b, f);
      return va != vb ? va < vb : a < b;
    });
    auto& val = pre.value[f];
    val.resize(x.rows);
    for (std::size_t r = 0; r < x.rows; ++r) val[r] = x.at(ord[r], f);
  }
  return pre;
}

// Grows trees level by level over presorted feature orders. One instance per
// worker thread; all mutable state lives here.
class TreeGrower {
 public:
  TreeGrower(const FeatureMatrix& x, const std::vector<std::uint8_t>& y,
             const Presorted& pre, const ForestParams& params)
      : x_(x), y_(y), pre_(pre), params_(params),
        n_(x.rows), d_(x.cols),
        mask_words_((x.cols + 63) / 64) {
    compact_order_.resize(d_);
    compact_value_.resize(d_);
  }

  DecisionTree grow(int tree_index) {
    rng::CounterRng gen(params_.seed, static_cast<std::uint64_t>(tree_index));

    bag_.assign(n_, 0);
    if (params_.bootstrap) {
      for (std::size_t i = 0; i < n_; ++i) bag_[gen.next_below(n_)] += 1;
    } else {
      bag_.assign(n_, 1);
    }

    for (std::size_t f = 0; f < d_; ++f) {
      auto& ord = compact_order_[f];
      auto& val = compact_value_[f];
      ord.clear();
      val.clear();
      const auto& src_ord = pre_.order[f];
      const auto& src_val = pre_.value[f];
      for (std::size_t r = 0; r < n_; ++r) {
        if (bag_[src_ord[r]] > 0) {
          ord.push_back(src_ord[r]);
          val.push_back(src_val[r]);
        }
      }
    }

    std::int64_t root_w = 0, root_p = 0;
    node_of_.assign(n_, -1);
    for (std::size_t i = 0; i < n_; ++i) {
      if (bag_[i] > 0) {
        node_of_[i] = 0;
        root_w += bag_[i];
        root_p += static_cast<std::int64_t>(bag_[i]) * (y_[i] ? 1 : 0);
      }
    }

    DecisionTree tree;
    tree.nodes.emplace_back();
    act_out_.assign(1, 0);
    act_w_.assign(1, root_w);
    act_p_.assign(1, root_p);

    const std::int64_t msl = params_.min_samples_leaf;
    int depth = 0;
    while (!act_out_.empty()) {
      const std::size_t n_active = act_out_.size();
      splitting_.assign(n_active, 0);
      feat_used_.assign(d_, 0);
      masks_.assign(n_active * mask_words_, 0);
      bool any_split = false;
      for (std::size_t s = 0; s < n_active; ++s) {
        const std::int64_t w = act_w_[s], p = act_p_[s];
        const bool can_split = p > 0 && p < w && w >= 2 * msl &&
                               (params_.max_depth == 0 || depth < params_.max_depth);
        if (!can_split) continue;
        splitting_[s] = 1;
        any_split = true;
        sample_features(gen, s);
      }
      if (!any_split) {
        for (std::size_t s = 0; s < n_active; ++s) make_leaf(tree, s);
        break;
      }

      find_splits(n_active, msl);
      commit_level(tree, n_active);
      ++depth;
    }
    return tree;
  }

 private:
  void sample_features(rng::CounterRng& gen, std::size_t slot) {
    feat_scratch_.resize(d_);
    std::iota(feat_scratch_.begin(), feat_scratch_.end(), 0u);
    for (int k = 0; k < params_.mtry; ++k) {
      const std::size_t j = k + gen.next_below(d_ - k);
      std::swap(feat_scratch_[k], feat_scratch_[j]);
      const std::uint32_t f = feat_scratch_[k];
      masks_[slot * mask_words_ + f / 64] |= std::uint64_t{1} << (f % 64);
      feat_used_[f] = 1;
    }
  }

  bool sampled(std::size_t slot, std::size_t f) const {
    return (masks_[slot * mask_words_ + f / 64] >> (f % 64)) & 1;
  }

  void make_leaf(DecisionTree& tree, std::size_t slot) {
    TreeNode& node = tree.nodes[act_out_[slot]];
    node.split_feature = -1;
    node.leaf_fraction =
        static_cast<double>(act_p_[slot]) / static_cast<double>(act_w_[slot]);
  }

  void find_splits(std::size_t n_active, std::int64_t msl) {
    best_g_.assign(n_active, -std::numeric_limits<double>::infinity());
    best_feat_.assign(n_active, -1);
    best_thr_.assign(n_active, 0.0);
    g_parent_.resize(n_active);
    for (std::size_t s = 0; s < n_active; ++s) {
      const double w = static_cast<double>(act_w_[s]);
      const double p = static_cast<double>(act_p_[s]);
      g_parent_[s] = (p * p + (w - p) * (w - p)) / w;
    }
    run_w_.resize(n_active);
    run_p_.resize(n_active);
    prev_v_.resize(n_active);

    for (std::size_t f = 0; f < d_; ++f) {
      if (!feat_used_[f]) continue;
      std::fill(run_w_.begin(), run_w_.end(), 0);
      std::fill(run_p_.begin(), run_p_.end(), 0);
      const auto& ord = compact_order_[f];
      const auto& val = compact_value_[f];
      for (std::size_t r = 0; r < ord.size(); ++r) {
        const std::uint32_t i = ord[r];
        const std::int32_t s = node_of_[i];
        if (s < 0 || !splitting_[s] || !sampled(s, f)) continue;
        const double v = val[r];
        const std::int64_t wl = run_w_[s];
        if (wl >= msl && v != prev_v_[s]) {
          const std::int64_t wr = act_w_[s] - wl;
          if (wr >= msl) {
            const double pl = static_cast<double>(run_p_[s]);
            const double pr = static_cast<double>(act_p_[s] - run_p_[s]);
            const double dwl = static_cast<double>(wl);
            const double dwr = static_cast<double>(wr);
            const double g = (pl * pl + (dwl - pl) * (dwl - pl)) / dwl +
                             (pr * pr + (dwr - pr) * (dwr - pr)) / dwr;
            // Maximizing g maximizes the Gini decrease; the strict > keeps
            // the lowest feature index / lowest threshold on ties.
            if (g > g_parent_[s] && g > best_g_[s]) {
              double thr = prev_v_[s] + (v - prev_v_[s]) / 2.0;
              if (thr >= v) thr = prev_v_[s];  // adjacent doubles
              best_g_[s] = g;
              best_feat_[s] = static_cast<int>(f);
              best_thr_[s] = thr;
            }
          }
        }
        run_w_[s] += bag_[i];
        run_p_[s] += static_cast<std::int64_t>(bag_[i]) * (y_[i] ? 1 : 0);
        prev_v_[s] = v;
      }
    }
  }

  void commit_level(DecisionTree& tree, std::size_t n_active) {
    next_out_.clear();
    next_w_.clear();
    next_p_.clear();
    left_slot_.assign(n_active, -1);
    right_slot_.assign(n_active, -1);
    for (std::size_t s = 0; s < n_active; ++s) {
      if (!splitting_[s] || best_feat_[s] < 0) {
        make_leaf(tree, s);
        continue;
      }
      const int left_out = static_cast<int>(tree.nodes.size());
      tree.nodes.emplace_back();
      tree.nodes.emplace_back();
      TreeNode& node = tree.nodes[act_out_[s]];
      node.split_feature = best_feat_[s];
      node.threshold = best_thr_[s];
      node.left = left_out;
      node.right = left_out + 1;
      left_slot_[s] = static_cast<std::int32_t>(next_out_.size());
      right_slot_[s] = left_slot_[s] + 1;
      next_out_.push_back(left_out);
      next_out_.push_back(left_out + 1);
      next_w_.insert(next_w_.end(), {0, 0});
      next_p_.insert(next_p_.end(), {0, 0});
    }
    for (std::size_t i = 0; i < n_; ++i) {
      const std::int32_t s = node_of_[i];
      if (s < 0) continue;
      if (left_slot_[s] < 0) {
        node_of_[i] = -1;
        continue;
      }
      const std::int32_t ns = x_.at(i, best_feat_[s]) <= best_thr_[s]
                                  ? left_slot_[s]
                                  : right_slot_[s];
      node_of_[i] = ns;
      next_w_[ns] += bag_[i];
      next_p_[ns] += static_cast<std::int64_t>(bag_[i]) * (y_[i] ? 1 : 0);
    }
    act_out_.swap(next_out_);
    act_w_.swap(next_w_);
    act_p_.swap(next_p_);
  }

  const FeatureMatrix& x_;
  const std::vector<std::uint8_t>& y_;
  const Presorted& pre_;
  const ForestParams& params_;
  const std::size_t n_, d_, mask_words_;

  std::vector<std::uint16_t> bag_;
  std::vector<std::vector<std::uint32_t>> compact_order_;
  std::vector<std::vector<double>> compact_value_;
  std::vector<std::int32_t> node_of_;

  std::vector<int> act_out_;
  std::vector<std::int64_t> act_w_, act_p_;
  std::vector<std::uint8_t> splitting_, feat_used_;
  std::vector<std::uint64_t> masks_;
  std::vector<std::uint32_t> feat_scratch_;

  std::vector<double> best_g_, best_thr_, g_parent_, prev_v_;
  std::vector<int> best_feat_;
  std::vector<std::int64_t> run_w_, run_p_;

  std::vector<int> next_out_;
  std::vector<std::int64_t> next_w_, next_p_;
  std::vector<std::int32_t> left_slot_, right_slot_;
};

}  // namespace

int resolve_mtry(GridSpec::MtryRule rule, std::size_t n_features) {
  const double d = static_cast<double>(n_features);
  const int m = rule == GridSpec::MtryRule::kSqrt
                    ? static_cast<int>(std::ceil(std::sqrt(d)))
                    : static_cast<int>(std::ceil(d / 3.0));
  return std::clamp(m, 1, static_cast<int>(n_features));
}

RandomForest fit_forest(const FeatureMatrix& x, const std::vector<std::uint8_t>& y,
                        const ForestParams& params,
                        std::vector<std::string> feature_names, int n_threads) {
  if (x.rows == 0 || x.cols == 0) throw std::invalid_argument("empty training data");
  if (y.size() != x.rows) throw std::invalid_argument("label count mismatch");
  if (params.n_trees < 1 || params.min_samples_leaf < 1 || params.max_depth < 0 ||
      params.mtry < 0 || params.mtry > static_cast<int>(x.cols)) {
    throw std::invalid_argument("invalid forest params");
  }
  for (double v : x.values) {
    if (!std::isfinite(v)) throw std::domain_error("non-finite feature value");
  }
  if (x.rows > 0xffffffffull) throw std::invalid_argument("too many rows");

  RandomForest forest;
  forest.params = params;
  if (forest.params.mtry == 0) {
    forest.params.mtry = resolve_mtry(GridSpec::MtryRule::kSqrt, x.cols);
  }
  if (feature_names.empty()) {
    for (std::size_t f = 0; f < x.cols; ++f) {
      feature_names.push_back("f" + std::to_string(f));
    }
  }
  if (feature_names.size() != x.cols) {
    throw std::invalid_argument("feature name count mismatch");
  }
  forest.feature_names = std::move(feature_names);

  const Presorted pre = presort(x);
  forest.trees.resize(params.n_trees);
  parallel_chunks(params.n_trees, n_threads, [&](std::size_t begin, std::size_t end) {
    TreeGrower grower(x, y, pre, forest.params);
    for (std::size_t t = begin; t < end; ++t) {
      forest.trees[t] = grower.grow(static_cast<int>(t));
    }
  });
  return forest;
}

double predict_proba(const RandomForest& forest, std::span<const double> x) {
  if (x.size() != forest.feature_names.size()) {
    throw std::invalid_argument("feature vector dimension mismatch");
  }
  double sum = 0.0;
  for (const DecisionTree& tree : forest.trees) sum += tree.predict(x.data());
  return sum / static_cast<double>(forest.trees.size());
}

std::vector<double> predict_all(const RandomForest& forest, const FeatureMatrix& x,
                                int n_threads) {
  if (x.cols != forest.feature_names.size()) {
    throw std::invalid_argument("feature matrix dimension mismatch");
  }
  std::vector<double> scores(x.rows);
  parallel_chunks(x.rows, n_threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      double sum = 0.0;
      for (const DecisionTree& tree : forest.trees) sum += tree.predict(x.row(r));
      scores[r] = sum / static_cast<double>(forest.trees.size());
    }
  });
  return scores;
}

GridSearchResult grid_search(const LabeledData& train, const LabeledData& valid,
                             const GridSpec& grid, std::uint64_t seed, bool bootstrap,
                             int n_threads) {
  if (grid.empty()) throw std::invalid_argument("empty hyperparameter grid");
  GridSearchResult result;
  double best_auc = -1.0;
  for (int n_trees : grid.n_trees) {
    for (int max_depth : grid.max_depth) {
      for (GridSpec::MtryRule rule : grid.mtry) {
        for (int msl : grid.min_samples_leaf) {
          ForestParams params;
          params.n_trees = n_trees;
          params.max_depth = max_depth;
          params.mtry = resolve_mtry(rule, train.x.cols);
          params.min_samples_leaf = msl;
          params.bootstrap = bootstrap;
          params.seed = seed;
          RandomForest forest = fit_forest(train.x, train.y, params, {}, n_threads);
          const auto scores = predict_all(forest, valid.x, n_threads);
          const double auc = pr_curve(scores, valid.y).auc;
          result.report.push_back({forest.params, auc});
          if (auc > best_auc) {
            best_auc = auc;
            result.best = forest.params;
          }
        }
      }
    }
  }
  return result;
}

nlohmann::ordered_json forest_to_json(const RandomForest& forest) {
  nlohmann::ordered_json j;
  j["format_version"] = 1;
  j["params"] = {{"n_trees", forest.params.n_trees},
                 {"max_depth", forest.params.max_depth},
                 {"min_samples_leaf", forest.params.min_samples_leaf},
                 {"mtry", forest.params.mtry},
                 {"bootstrap", forest.params.bootstrap},
                 {"seed", forest.params.seed}};
  j["feature_names"] = forest.feature_names;
  nlohmann::ordered_json trees = nlohmann::ordered_json::array();
  for (const DecisionTree& tree : forest.trees) {
    nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
    for (const TreeNode& n : tree.nodes) {
      nodes.push_back({{"split_feature", n.split_feature},
                       {"threshold", n.threshold},
                       {"left", n.left},
                       {"right", n.right},
                       {"leaf_fraction", n.leaf_fraction}});
    }
    trees.push_back(std::move(nodes));
  }
  j["trees"] = std::move(trees);
  return j;
}

RandomForest forest_from_json(const nlohmann::json& j) {
  if (j.at("format_version").get<int>() != 1) {
    throw std::runtime_error("unsupported forest format_version");
  }
  RandomForest forest;
  const auto& p = j.at("params");
  forest.params.n_trees = p.at("n_trees").get<int>();
  forest.params.max_depth = p.at("max_depth").get<int>();
  forest.params.min_samples_leaf = p.at("min_samples_leaf").get<int>();
  forest.params.mtry = p.at("mtry").get<int>();
  forest.params.bootstrap = p.at("bootstrap").get<bool>();
  forest.params.seed = p.at("seed").get<std::uint64_t>();
  forest.feature_names = j.at("feature_names").get<std::vector<std::string>>();
  for (const auto& tj : j.at("trees")) {
    DecisionTree tree;
    for (const auto& nj : tj) {
      TreeNode n;
      n.split_feature = nj.at("split_feature").get<int>();
      n.threshold = nj.at("threshold").get<double>();
      n.left = nj.at("left").get<int>();
      n.right = nj.at("right").get<int>();
      n.leaf_fraction = nj.at("leaf_fraction").get<double>();
      if (n.split_feature >= static_cast<int>(forest.feature_names.size())) {
        throw std::runtime_error("forest node references unknown feature");
      }
      tree.nodes.push_back(n);
    }
    if (tree.nodes.empty()) throw std::runtime_error("empty tree in forest file");
    forest.trees.push_back(std::move(tree));
  }
  if (forest.trees.size() != static_cast<std::size_t>(forest.params.n_trees)) {
    throw std::runtime_error("tree count does not match params.n_trees");
  }
  return forest;
}

void save_forest(const RandomForest& forest, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << forest_to_json(forest).dump() << "\n";
}

RandomForest load_forest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open forest file: " + path);
  nlohmann::json j;
  in >> j;
  return forest_from_json(j);
}

}  // namespace fraudml::rf
