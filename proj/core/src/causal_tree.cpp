#include "causalsurv/causal_tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include <nlohmann/json.hpp>

#include "causalsurv/rng.hpp"
#include "text_util.hpp"

namespace causalsurv {

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> honest_partition(
    std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  auto rng = make_engine(seed);
  partial_shuffle(idx, n, rng);
  const std::size_t half = n / 2;
  std::vector<std::size_t> train(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(half));
  std::vector<std::size_t> estimate(idx.begin() + static_cast<std::ptrdiff_t>(half), idx.end());
  std::sort(train.begin(), train.end());
  std::sort(estimate.begin(), estimate.end());
  return {std::move(train), std::move(estimate)};
}

namespace {

struct ArmStats {
  std::size_t n_treated = 0;
  std::size_t n_control = 0;
  double sum_treated = 0.0;
  double sum_control = 0.0;

  double tau() const {
    return sum_treated / static_cast<double>(n_treated) -
           sum_control / static_cast<double>(n_control);
  }
};

ArmStats stats_over(const std::vector<SurvivalRecord>& recs,
                    const std::vector<std::size_t>& idx) {
  ArmStats s;
  for (auto i : idx) {
    if (recs[i].treatment == 1) {
      s.n_treated += 1;
      s.sum_treated += recs[i].time;
    } else {
      s.n_control += 1;
      s.sum_control += recs[i].time;
    }
  }
  return s;
}

struct GrowContext {
  const std::vector<SurvivalRecord>& recs;  // id-sorted
  std::size_t p;
  const CausalTreeConfig& config;
  std::mt19937_64 candidate_rng;
  int next_leaf_id = 0;
};

struct SplitChoice {
  bool found = false;
  std::size_t feature = 0;
  double threshold = 0.0;
  double gain = 0.0;
};

struct FeatureEntry {
  double value;
  double y;
  bool treated;
};

// Size-weighted squared-effect gain for the candidate putting the first
// `n_left` value-sorted train entries left, or nan when inadmissible.
double candidate_gain(const std::vector<std::size_t>& cum_treated,
                      const std::vector<double>& cum_sum_treated,
                      const std::vector<std::size_t>& cum_control,
                      const std::vector<double>& cum_sum_control, std::size_t n_left,
                      double parent_term, const CausalTreeConfig& config) {
  const std::size_t total = cum_treated.size();
  const std::size_t t_left = cum_treated[n_left - 1];
  const std::size_t c_left = cum_control[n_left - 1];
  const std::size_t t_right = cum_treated[total - 1] - t_left;
  const std::size_t c_right = cum_control[total - 1] - c_left;
  if (t_left < config.min_treated_leaf || t_right < config.min_treated_leaf) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  if (c_left < config.min_control_leaf || c_right < config.min_control_leaf) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  const double st_left = cum_sum_treated[n_left - 1];
  const double sc_left = cum_sum_control[n_left - 1];
  const double st_right = cum_sum_treated[total - 1] - st_left;
  const double sc_right = cum_sum_control[total - 1] - sc_left;
  const double tau_left = st_left / static_cast<double>(t_left) -
                          sc_left / static_cast<double>(c_left);
  const double tau_right = st_right / static_cast<double>(t_right) -
                           sc_right / static_cast<double>(c_right);
  const double n_l = static_cast<double>(t_left + c_left);
  const double n_r = static_cast<double>(t_right + c_right);
  return n_l * tau_left * tau_left + n_r * tau_right * tau_right - parent_term;
}

SplitChoice find_split(GrowContext& ctx, const std::vector<std::size_t>& train_idx,
                       const std::vector<std::size_t>& est_idx, const ArmStats& train_stats) {
  SplitChoice best;
  const double tau_parent = train_stats.tau();
  const double parent_term =
      static_cast<double>(train_idx.size()) * tau_parent * tau_parent;

  std::vector<FeatureEntry> entries(train_idx.size());
  std::vector<std::size_t> cum_treated(train_idx.size());
  std::vector<double> cum_sum_treated(train_idx.size());
  std::vector<std::size_t> cum_control(train_idx.size());
  std::vector<double> cum_sum_control(train_idx.size());
  std::vector<double> est_treated_vals, est_control_vals, train_vals;

  for (std::size_t f = 0; f < ctx.p; ++f) {
    for (std::size_t k = 0; k < train_idx.size(); ++k) {
      const auto& r = ctx.recs[train_idx[k]];
      entries[k] = {r.covariates[f], r.time, r.treatment == 1};
    }
    std::stable_sort(entries.begin(), entries.end(),
                     [](const FeatureEntry& a, const FeatureEntry& b) { return a.value < b.value; });
    if (!(entries.front().value < entries.back().value)) continue;

    std::size_t t_acc = 0, c_acc = 0;
    double st_acc = 0.0, sc_acc = 0.0;
    for (std::size_t k = 0; k < entries.size(); ++k) {
      if (entries[k].treated) {
        t_acc += 1;
        st_acc += entries[k].y;
      } else {
        c_acc += 1;
        sc_acc += entries[k].y;
      }
      cum_treated[k] = t_acc;
      cum_sum_treated[k] = st_acc;
      cum_control[k] = c_acc;
      cum_sum_control[k] = sc_acc;
    }

    const bool honest = ctx.config.honest;
    if (honest) {
      est_treated_vals.clear();
      est_control_vals.clear();
      for (auto i : est_idx) {
        (ctx.recs[i].treatment == 1 ? est_treated_vals : est_control_vals)
            .push_back(ctx.recs[i].covariates[f]);
      }
      std::sort(est_treated_vals.begin(), est_treated_vals.end());
      std::sort(est_control_vals.begin(), est_control_vals.end());
    }

    auto admissible_on_estimate = [&](double threshold) {
      if (!honest) return true;
      const auto t_left = static_cast<std::size_t>(
          std::lower_bound(est_treated_vals.begin(), est_treated_vals.end(), threshold) -
          est_treated_vals.begin());
      const auto c_left = static_cast<std::size_t>(
          std::lower_bound(est_control_vals.begin(), est_control_vals.end(), threshold) -
          est_control_vals.begin());
      return t_left >= ctx.config.min_treated_leaf &&
             est_treated_vals.size() - t_left >= ctx.config.min_treated_leaf &&
             c_left >= ctx.config.min_control_leaf &&
             est_control_vals.size() - c_left >= ctx.config.min_control_leaf;
    };

    auto consider = [&](std::size_t n_left, double threshold) {
      const double gain = candidate_gain(cum_treated, cum_sum_treated, cum_control,
                                         cum_sum_control, n_left, parent_term, ctx.config);
      if (std::isnan(gain)) return;
      if (!admissible_on_estimate(threshold)) return;
      if (!best.found || gain > best.gain) best = {true, f, threshold, gain};
    };

    if (ctx.config.random_split_candidates) {
      const double lo = entries.front().value;
      const double hi = entries.back().value;
      train_vals.resize(entries.size());
      for (std::size_t k = 0; k < entries.size(); ++k) train_vals[k] = entries[k].value;
      std::uniform_real_distribution<double> draw(lo, hi);
      std::vector<double> thresholds(ctx.config.n_split_candidates);
      for (auto& t : thresholds) t = draw(ctx.candidate_rng);
      std::sort(thresholds.begin(), thresholds.end());
      for (double threshold : thresholds) {
        const auto n_left = static_cast<std::size_t>(
            std::lower_bound(train_vals.begin(), train_vals.end(), threshold) -
            train_vals.begin());
        if (n_left == 0 || n_left == entries.size()) continue;
        consider(n_left, threshold);
      }
    } else {
      for (std::size_t k = 0; k + 1 < entries.size(); ++k) {
        if (!(entries[k].value < entries[k + 1].value)) continue;
        const double threshold = entries[k].value + (entries[k + 1].value - entries[k].value) / 2.0;
        if (!(threshold > entries[k].value)) continue;  // adjacent doubles, no room between
        consider(k + 1, threshold);
      }
    }
  }
  return best;
}

std::int32_t grow(GrowContext& ctx, CausalTree& tree, const std::vector<std::size_t>& train_idx,
                  const std::vector<std::size_t>& est_idx, std::size_t depth) {
  const ArmStats train_stats = stats_over(ctx.recs, train_idx);
  const ArmStats est_stats = ctx.config.honest ? stats_over(ctx.recs, est_idx) : train_stats;

  SplitChoice choice;
  if (depth < ctx.config.max_depth) choice = find_split(ctx, train_idx, est_idx, train_stats);

  const auto index = static_cast<std::int32_t>(tree.nodes.size());
  tree.nodes.emplace_back();
  if (!choice.found || !(choice.gain > ctx.config.min_effect_gain)) {
    auto& leaf = tree.nodes.back();
    leaf.leaf_id = ctx.next_leaf_id++;
    leaf.n_treated = est_stats.n_treated;
    leaf.n_control = est_stats.n_control;
    leaf.y_bar_treated = est_stats.sum_treated / static_cast<double>(est_stats.n_treated);
    leaf.y_bar_control = est_stats.sum_control / static_cast<double>(est_stats.n_control);
    leaf.tau_hat = leaf.y_bar_treated - leaf.y_bar_control;
    return index;
  }

  tree.nodes[index].feature_index = static_cast<int>(choice.feature);
  tree.nodes[index].threshold = choice.threshold;
  std::vector<std::size_t> train_left, train_right, est_left, est_right;
  for (auto i : train_idx) {
    (ctx.recs[i].covariates[choice.feature] < choice.threshold ? train_left : train_right)
        .push_back(i);
  }
  if (ctx.config.honest) {
    for (auto i : est_idx) {
      (ctx.recs[i].covariates[choice.feature] < choice.threshold ? est_left : est_right)
          .push_back(i);
    }
  } else {
    est_left = train_left;
    est_right = train_right;
  }
  const auto left = grow(ctx, tree, train_left, est_left, depth + 1);
  tree.nodes[index].left = left;
  const auto right = grow(ctx, tree, train_right, est_right, depth + 1);
  tree.nodes[index].right = right;
  return index;
}

std::string feature_label(std::span<const std::string> names, int f) {
  if (f >= 0 && static_cast<std::size_t>(f) < names.size()) return names[static_cast<std::size_t>(f)];
  return "x" + std::to_string(f);
}

}  // namespace

CausalTree fit_causal_tree(std::span<const SurvivalRecord> records,
                           const CausalTreeConfig& config, std::uint64_t seed) {
  if (config.min_treated_leaf < 2 || config.min_control_leaf < 2) {
    throw std::invalid_argument("per-arm leaf minimums must be at least 2");
  }
  if (config.max_depth < 1) throw std::invalid_argument("max_depth must be at least 1");
  if (config.min_effect_gain < 0.0) {
    throw std::invalid_argument("min_effect_gain must be nonnegative");
  }
  if (!(config.n_split_candidates > 0)) {
    throw std::invalid_argument("n_split_candidates must be positive");
  }

  std::vector<SurvivalRecord> recs;
  recs.reserve(records.size());
  for (const auto& r : records) {
    if (config.uncensored_only && r.event == 0) continue;
    recs.push_back(r);
  }
  std::sort(recs.begin(), recs.end(),
            [](const SurvivalRecord& a, const SurvivalRecord& b) { return a.id < b.id; });

  bool any_treated = false, any_control = false;
  for (const auto& r : recs) {
    (r.treatment == 1 ? any_treated : any_control) = true;
  }
  if (!any_treated || !any_control) throw std::invalid_argument("both treatments required");

  std::vector<std::size_t> train_idx, est_idx;
  if (config.honest) {
    std::tie(train_idx, est_idx) = honest_partition(recs.size(), seed);
  } else {
    train_idx.resize(recs.size());
    std::iota(train_idx.begin(), train_idx.end(), std::size_t{0});
    est_idx = train_idx;
  }

  const ArmStats train_root = stats_over(recs, train_idx);
  const ArmStats est_root = stats_over(recs, est_idx);
  if (train_root.n_treated < config.min_treated_leaf ||
      est_root.n_treated < config.min_treated_leaf ||
      train_root.n_control < config.min_control_leaf ||
      est_root.n_control < config.min_control_leaf) {
    throw std::invalid_argument("insufficient records per arm at the root");
  }

  CausalTree tree;
  tree.n_features = recs.empty() ? 0 : recs[0].covariates.size();
  tree.config = config;
  tree.seed = seed;
  tree.root_ate = est_root.tau();

  GrowContext ctx{recs, tree.n_features, config, make_engine(seed, {1}), 0};
  grow(ctx, tree, train_idx, est_idx, 0);
  tree.n_leaves = static_cast<std::size_t>(ctx.next_leaf_id);
  return tree;
}

int leaf_assign(const CausalTree& tree, std::span<const double> covariates) {
  if (covariates.size() != tree.n_features) {
    throw std::invalid_argument("covariate length mismatch");
  }
  std::int32_t at = 0;
  while (!tree.nodes[static_cast<std::size_t>(at)].is_leaf()) {
    const auto& node = tree.nodes[static_cast<std::size_t>(at)];
    const double v = covariates[static_cast<std::size_t>(node.feature_index)];
    at = v < node.threshold ? node.left : node.right;
  }
  return tree.nodes[static_cast<std::size_t>(at)].leaf_id;
}

std::vector<LeafReport> extract_leaf_reports(const CausalTree& tree,
                                             std::span<const std::string> feature_names) {
  std::vector<LeafReport> reports;
  std::vector<PathCondition> path;
  auto walk = [&](auto&& self, std::int32_t at) -> void {
    const auto& node = tree.nodes[static_cast<std::size_t>(at)];
    if (node.is_leaf()) {
      reports.push_back({node.leaf_id, path, node.tau_hat, node.n_treated, node.n_control});
      return;
    }
    path.push_back({feature_label(feature_names, node.feature_index), false, node.threshold});
    self(self, node.left);
    path.back().geq = true;
    self(self, node.right);
    path.pop_back();
  };
  walk(walk, 0);
  std::sort(reports.begin(), reports.end(),
            [](const LeafReport& a, const LeafReport& b) { return a.leaf_id < b.leaf_id; });
  return reports;
}

std::vector<int> select_leaves(const CausalTree& tree, double ate_threshold) {
  std::vector<int> out;
  for (const auto& node : tree.nodes) {
    if (node.is_leaf() && std::abs(node.tau_hat - tree.root_ate) >= ate_threshold) {
      out.push_back(node.leaf_id);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::size_t> tree_split_features(const CausalTree& tree) {
  std::vector<std::size_t> features;
  for (const auto& node : tree.nodes) {
    if (!node.is_leaf()) features.push_back(static_cast<std::size_t>(node.feature_index));
  }
  std::sort(features.begin(), features.end());
  features.erase(std::unique(features.begin(), features.end()), features.end());
  return features;
}

std::string tree_to_dot(const CausalTree& tree, std::span<const std::string> feature_names) {
  std::string out = "digraph causal_tree {\n  node [shape=box];\n";
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    const auto& node = tree.nodes[i];
    out += "  n" + std::to_string(i) + " [label=\"";
    if (node.is_leaf()) {
      out += "leaf " + std::to_string(node.leaf_id) + "\\ntau_hat = " +
             detail::format_double(node.tau_hat) + " days\\ntreated " +
             std::to_string(node.n_treated) + " / control " + std::to_string(node.n_control);
    } else {
      out += feature_label(feature_names, node.feature_index) + " < " +
             detail::format_double(node.threshold);
    }
    out += "\"];\n";
    if (!node.is_leaf()) {
      out += "  n" + std::to_string(i) + " -> n" + std::to_string(node.left) +
             " [label=\"yes\"];\n";
      out += "  n" + std::to_string(i) + " -> n" + std::to_string(node.right) +
             " [label=\"no\"];\n";
    }
  }
  out += "}\n";
  return out;
}

namespace {

using ordered_json = nlohmann::ordered_json;

}  // namespace

std::string tree_to_json(const CausalTree& tree) {
  ordered_json j;
  j["config"] = {{"honest", tree.config.honest},
                 {"min_treated_leaf", tree.config.min_treated_leaf},
                 {"min_control_leaf", tree.config.min_control_leaf},
                 {"max_depth", tree.config.max_depth},
                 {"min_effect_gain", tree.config.min_effect_gain},
                 {"random_split_candidates", tree.config.random_split_candidates},
                 {"n_split_candidates", tree.config.n_split_candidates},
                 {"uncensored_only", tree.config.uncensored_only}};
  j["seed"] = tree.seed;
  j["n_features"] = tree.n_features;
  j["n_leaves"] = tree.n_leaves;
  j["root_ate"] = tree.root_ate;
  ordered_json nodes = ordered_json::array();
  for (const auto& node : tree.nodes) {
    ordered_json n;
    n["feature"] = node.feature_index;
    n["threshold"] = node.threshold;
    n["left"] = node.left;
    n["right"] = node.right;
    if (node.is_leaf()) {
      n["leaf_id"] = node.leaf_id;
      n["tau_hat"] = node.tau_hat;
      n["n_treated"] = node.n_treated;
      n["n_control"] = node.n_control;
      n["y_bar_treated"] = node.y_bar_treated;
      n["y_bar_control"] = node.y_bar_control;
    }
    nodes.push_back(std::move(n));
  }
  j["nodes"] = std::move(nodes);
  return j.dump();
}

CausalTree tree_from_json(const std::string& text) {
  const auto j = ordered_json::parse(text);
  CausalTree tree;
  const auto& c = j.at("config");
  tree.config.honest = c.at("honest").get<bool>();
  tree.config.min_treated_leaf = c.at("min_treated_leaf").get<std::size_t>();
  tree.config.min_control_leaf = c.at("min_control_leaf").get<std::size_t>();
  tree.config.max_depth = c.at("max_depth").get<std::size_t>();
  tree.config.min_effect_gain = c.at("min_effect_gain").get<double>();
  tree.config.random_split_candidates = c.at("random_split_candidates").get<bool>();
  tree.config.n_split_candidates = c.at("n_split_candidates").get<std::size_t>();
  tree.config.uncensored_only = c.at("uncensored_only").get<bool>();
  tree.seed = j.at("seed").get<std::uint64_t>();
  tree.n_features = j.at("n_features").get<std::size_t>();
  tree.n_leaves = j.at("n_leaves").get<std::size_t>();
  tree.root_ate = j.at("root_ate").get<double>();
  for (const auto& jn : j.at("nodes")) {
    CausalTreeNode node;
    node.feature_index = jn.at("feature").get<int>();
    node.threshold = jn.at("threshold").get<double>();
    node.left = jn.at("left").get<std::int32_t>();
    node.right = jn.at("right").get<std::int32_t>();
    if (node.is_leaf()) {
      node.leaf_id = jn.at("leaf_id").get<int>();
      node.tau_hat = jn.at("tau_hat").get<double>();
      node.n_treated = jn.at("n_treated").get<std::size_t>();
      node.n_control = jn.at("n_control").get<std::size_t>();
      node.y_bar_treated = jn.at("y_bar_treated").get<double>();
      node.y_bar_control = jn.at("y_bar_control").get<double>();
    }
    tree.nodes.push_back(node);
  }
  return tree;
}

}  // namespace causalsurv
