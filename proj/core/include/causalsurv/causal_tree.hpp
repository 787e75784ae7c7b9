#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "causalsurv/survival_core.hpp"

namespace causalsurv {

struct CausalTreeConfig {
  bool honest = true;  // 50/50 train/estimate split; tau_hat from the estimate half
  std::size_t min_treated_leaf = 10;
  std::size_t min_control_leaf = 10;
  std::size_t max_depth = 4;
  double min_effect_gain = 0.0;  // a split must beat this to be accepted
  bool random_split_candidates = false;  // default: exhaustive midpoints
  std::size_t n_split_candidates = 10;   // used when random_split_candidates
  bool uncensored_only = false;          // restrict to event=1 records
};

// Flat node, same routing convention as the survival trees: covariate <
// threshold goes left, >= goes right. Leaf statistics come from the
// estimation half when honest.
struct CausalTreeNode {
  int feature_index = -1;  // -1 marks a leaf
  double threshold = 0.0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  int leaf_id = -1;  // leaves numbered 0.. in depth-first order
  double tau_hat = 0.0;
  std::size_t n_treated = 0;
  std::size_t n_control = 0;
  double y_bar_treated = 0.0;
  double y_bar_control = 0.0;

  bool is_leaf() const { return feature_index < 0; }
};

struct CausalTree {
  std::vector<CausalTreeNode> nodes;  // root at index 0
  double root_ate = 0.0;              // estimation-sample effect at the root
  std::size_t n_features = 0;
  std::size_t n_leaves = 0;
  CausalTreeConfig config;
  std::uint64_t seed = 0;
};

struct PathCondition {
  std::string feature;
  bool geq = false;  // false: value < threshold, true: value >= threshold
  double threshold = 0.0;
};

struct LeafReport {
  int leaf_id = -1;
  std::vector<PathCondition> path;
  double tau_hat = 0.0;
  std::size_t n_treated = 0;
  std::size_t n_control = 0;
};

// Seeded 50/50 partition used for honest fitting: records are taken in id
// order, shuffled, and split into (train, estimate) index halves.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> honest_partition(
    std::size_t n, std::uint64_t seed);

// Outcome is the observed time in days. Splits maximize the size-weighted
// squared-effect gain sum(n_child * tau_child^2) - n_parent * tau_parent^2
// on the train half, subject to per-arm leaf minimums on both halves; ties
// break toward the lowest feature index, then the lowest threshold.
CausalTree fit_causal_tree(std::span<const SurvivalRecord> records,
                           const CausalTreeConfig& config, std::uint64_t seed);

int leaf_assign(const CausalTree& tree, std::span<const double> covariates);

// One report per leaf, ordered by leaf_id. feature_names may be empty, in
// which case features are named "x<i>".
std::vector<LeafReport> extract_leaf_reports(const CausalTree& tree,
                                             std::span<const std::string> feature_names);

// Leaves with |tau_hat - root_ate| >= ate_threshold, ordered by leaf_id.
std::vector<int> select_leaves(const CausalTree& tree, double ate_threshold);

// Sorted distinct feature indices used by any internal node.
std::vector<std::size_t> tree_split_features(const CausalTree& tree);

std::string tree_to_dot(const CausalTree& tree, std::span<const std::string> feature_names);

// Lossless structured round trip.
std::string tree_to_json(const CausalTree& tree);
CausalTree tree_from_json(const std::string& text);

}  // namespace causalsurv
