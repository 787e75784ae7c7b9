#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "causalsurv/survival_core.hpp"

namespace causalsurv {

struct ForestConfig {
  std::size_t n_trees = 200;
  std::size_t mtry = 0;  // 0 = resolve to ceil(sqrt(p)) at fit time
  std::size_t min_leaf = 15;
  std::size_t min_events_leaf = 3;
  std::size_t n_split_candidates = 10;  // random thresholds tried per feature
  std::size_t max_depth = 0;            // 0 = unlimited
};

// Flat node: internal nodes carry feature_index/threshold and child indices,
// leaves carry a KM curve on their own event-time grid. Routing convention:
// covariate < threshold goes left, >= goes right.
struct SurvivalTreeNode {
  int feature_index = -1;  // -1 marks a leaf
  double threshold = 0.0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  SurvivalCurve curve;
  std::size_t n_samples = 0;

  bool is_leaf() const { return feature_index < 0; }
};

struct SurvivalTree {
  std::vector<SurvivalTreeNode> nodes;      // root at index 0
  std::vector<std::uint32_t> inbag_counts;  // bootstrap multiplicity per training record
};

struct SurvivalForest {
  std::vector<SurvivalTree> trees;
  std::vector<double> time_grid;  // distinct training event times
  ForestConfig config;            // with mtry resolved
  std::uint64_t seed = 0;
  std::size_t n_features = 0;
};

// Grow one tree on the given records (no bootstrap here). At each node, mtry
// features are sampled and each contributes n_split_candidates thresholds
// drawn uniformly between its observed min and max; candidates are scored by
// the log-rank chi_sq between the two children and the best admissible one
// wins. Leaves get the KM curve of their records.
SurvivalTree fit_survival_tree(std::span<const SurvivalRecord> records,
                               const ForestConfig& config, std::mt19937_64& rng);

// n_trees bootstrap trees, each from an RNG stream derived from
// (seed, tree_index) so the result is independent of thread count.
SurvivalForest fit_survival_forest(std::span<const SurvivalRecord> records,
                                   const ForestConfig& config, std::uint64_t seed,
                                   unsigned n_threads = 1);

// Pointwise mean of the per-tree leaf curves evaluated on forest.time_grid,
// with a running-minimum guard for monotonicity.
SurvivalCurve predict_survival(const SurvivalForest& forest, std::span<const double> covariates);

// 1 - Harrell's C where each record is scored by its out-of-bag ensemble
// mortality (sum over the grid of -log max(S, 1e-12)). Records that are
// in-bag everywhere are excluded; throws if none remain.
double oob_error(const SurvivalForest& forest, std::span<const SurvivalRecord> records);

// Lossless round trip of topology, thresholds, leaf curves, grid, inbag
// counts, config, and seed.
std::string forest_to_json(const SurvivalForest& forest);
SurvivalForest forest_from_json(const std::string& text);

}  // namespace causalsurv
