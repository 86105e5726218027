#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace fraudml::rf {

struct FeatureMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;  // row-major

  double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
  const double* row(std::size_t r) const { return values.data() + r * cols; }
};

struct LabeledData {
  FeatureMatrix x;
  std::vector<std::uint8_t> y;
};

struct ForestParams {
  int n_trees = 100;
  int max_depth = 0;         // 0 = unbounded
  int min_samples_leaf = 1;  // counted in bootstrap multiplicity
  int mtry = 0;              // features per split; 0 = ceil(sqrt(n_features))
  bool bootstrap = true;
  std::uint64_t seed = 0;
};

struct TreeNode {
  int split_feature = -1;  // -1 marks a leaf
  double threshold = 0.0;  // goes left when value <= threshold
  int left = -1;
  int right = -1;
  double leaf_fraction = 0.0;  // positive-class fraction at the leaf
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // breadth-first, root at 0

  double predict(const double* x) const {
    int i = 0;
    while (nodes[i].split_feature >= 0) {
      i = x[nodes[i].split_feature] <= nodes[i].threshold ? nodes[i].left
                                                          : nodes[i].right;
    }
    return nodes[i].leaf_fraction;
  }
};

struct RandomForest {
  std::vector<DecisionTree> trees;
  ForestParams params;  // mtry stored as the resolved value
  std::vector<std::string> feature_names;
};

// CART with Gini impurity on bootstrap samples, mtry features considered per
// split, ties broken by lowest feature index then lowest threshold. Each
// tree draws from an RNG stream keyed by (seed, tree index), so parallel and
// serial fits produce identical forests.
RandomForest fit_forest(const FeatureMatrix& x, const std::vector<std::uint8_t>& y,
                        const ForestParams& params,
                        std::vector<std::string> feature_names = {}, int n_threads = 0);

// Mean over trees of leaf positive fractions. Throws on dimension mismatch.
double predict_proba(const RandomForest& forest, std::span<const double> x);

std::vector<double> predict_all(const RandomForest& forest, const FeatureMatrix& x,
                                int n_threads = 0);

// Hyperparameter grid; the cartesian product is walked with n_trees
// outermost, then max_depth, mtry, min_samples_leaf.
struct GridSpec {
  enum class MtryRule { kSqrt, kThird };

  std::vector<int> n_trees{100, 300};
  std::vector<int> max_depth{8, 16, 0};
  std::vector<MtryRule> mtry{MtryRule::kSqrt, MtryRule::kThird};
  std::vector<int> min_samples_leaf{1, 5};

  bool empty() const {
    return n_trees.empty() || max_depth.empty() || mtry.empty() ||
           min_samples_leaf.empty();
  }
};

int resolve_mtry(GridSpec::MtryRule rule, std::size_t n_features);

struct GridPointResult {
  ForestParams params;
  double validation_pr_auc = 0.0;
};

struct GridSearchResult {
  ForestParams best;
  std::vector<GridPointResult> report;  // grid order
};

// Fits every grid point on `train`, scores PR-AUC on `valid`, returns the
// argmax (ties broken by earlier grid order). Deterministic given `seed`.
GridSearchResult grid_search(const LabeledData& train, const LabeledData& valid,
                             const GridSpec& grid, std::uint64_t seed,
                             bool bootstrap = true, int n_threads = 0);

nlohmann::ordered_json forest_to_json(const RandomForest& forest);
RandomForest forest_from_json(const nlohmann::json& j);
void save_forest(const RandomForest& forest, const std::string& path);
RandomForest load_forest(const std::string& path);

}  // namespace fraudml::rf
