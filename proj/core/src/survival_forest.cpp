#include "causalsurv/survival_forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "causalsurv/parallel.hpp"
#include "causalsurv/rng.hpp"

namespace causalsurv {

namespace {

// One bootstrap position: outcome plus the original record it points at.
struct TreeData {
  std::span<const SurvivalRecord> records;
  std::vector<std::uint32_t> orig;  // position -> record index
  std::size_t p = 0;
};

double covariate_at(const TreeData& data, std::uint32_t pos, std::size_t feature) {
  return data.records[data.orig[pos]].covariates[feature];
}

SurvivalCurve km_from_positions(const TreeData& data, std::span<const std::uint32_t> pos) {
  std::vector<std::pair<double, int>> outcomes;
  outcomes.reserve(pos.size());
  for (auto i : pos) {
    const auto& r = data.records[data.orig[i]];
    outcomes.emplace_back(r.time, r.event);
  }
  std::sort(outcomes.begin(), outcomes.end());

  SurvivalCurve curve;
  double surv = 1.0;
  std::size_t i = 0;
  const std::size_t n = outcomes.size();
  while (i < n) {
    const double t = outcomes[i].first;
    const double at_risk = static_cast<double>(n - i);
    std::size_t deaths = 0;
    std::size_t j = i;
    while (j < n && outcomes[j].first == t) {
      deaths += static_cast<std::size_t>(outcomes[j].second != 0);
      ++j;
    }
    if (deaths > 0) {
      surv *= 1.0 - static_cast<double>(deaths) / at_risk;
      curve.times.push_back(t);
      curve.probs.push_back(surv);
    }
    i = j;
  }
  return curve;
}

struct SplitChoice {
  bool found = false;
  std::size_t feature = 0;
  double threshold = 0.0;
  double score = 0.0;
};

// Log-rank chi_sq between the two value-defined children, computed in one
// pass over positions that the caller keeps sorted by time. Returns a
// negative value when the candidate is inadmissible.
double score_candidate(const TreeData& data, std::span<const std::uint32_t> by_time,
                       std::size_t feature, double threshold, const ForestConfig& config) {
  std::size_t n_left = 0;
  std::size_t events_left = 0, events_right = 0;
  for (auto pos : by_time) {
    const bool left = covariate_at(data, pos, feature) < threshold;
    n_left += left;
    const auto& r = data.records[data.orig[pos]];
    if (r.event != 0) {
      (left ? events_left : events_right) += 1;
    }
  }
  const std::size_t n_right = by_time.size() - n_left;
  if (n_left < config.min_leaf || n_right < config.min_leaf) return -1.0;
  if (events_left < config.min_events_leaf || events_right < config.min_events_leaf) return -1.0;

  double at_risk_left = static_cast<double>(n_left);
  double at_risk_right = static_cast<double>(n_right);
  double diff_sum = 0.0, variance = 0.0;
  std::size_t i = 0;
  while (i < by_time.size()) {
    const double t = data.records[data.orig[by_time[i]]].time;
    double d_left = 0.0, d_right = 0.0;
    double removed_left = 0.0, removed_right = 0.0;
    std::size_t j = i;
    while (j < by_time.size() && data.records[data.orig[by_time[j]]].time == t) {
      const auto& r = data.records[data.orig[by_time[j]]];
      const bool left = covariate_at(data, by_time[j], feature) < threshold;
      (left ? removed_left : removed_right) += 1.0;
      if (r.event != 0) (left ? d_left : d_right) += 1.0;
      ++j;
    }
    const double d = d_left + d_right;
    if (d > 0.0) {
      const double n_total = at_risk_left + at_risk_right;
      const double frac = at_risk_left / n_total;
      diff_sum += d_left - d * frac;
      if (n_total > 1.0) {
        variance += d * frac * (1.0 - frac) * (n_total - d) / (n_total - 1.0);
      }
    }
    at_risk_left -= removed_left;
    at_risk_right -= removed_right;
    i = j;
  }
  if (!(variance > 0.0)) return -1.0;  // degenerate, skipped uniformly
  return diff_sum * diff_sum / variance;
}

SplitChoice find_split(const TreeData& data, std::span<const std::uint32_t> by_time,
                       const ForestConfig& config, std::mt19937_64& rng) {
  SplitChoice best;
  if (by_time.size() < 2 * config.min_leaf) return best;

  std::vector<std::size_t> features(data.p);
  std::iota(features.begin(), features.end(), std::size_t{0});
  partial_shuffle(features, config.mtry, rng);

  for (std::size_t k = 0; k < config.mtry && k < features.size(); ++k) {
    const std::size_t f = features[k];
    double lo = covariate_at(data, by_time[0], f);
    double hi = lo;
    for (auto pos : by_time) {
      const double v = covariate_at(data, pos, f);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (!(lo < hi)) continue;
    std::uniform_real_distribution<double> draw(lo, hi);
    for (std::size_t c = 0; c < config.n_split_candidates; ++c) {
      const double threshold = draw(rng);
      const double score = score_candidate(data, by_time, f, threshold, config);
      if (score >= 0.0 && (!best.found || score > best.score)) {
        best = {true, f, threshold, score};
      }
    }
  }
  return best;
}

std::int32_t build_node(SurvivalTree& tree, const TreeData& data,
                        std::vector<std::uint32_t>& pos, std::size_t depth,
                        const ForestConfig& config, std::mt19937_64& rng) {
  // keep positions time-ordered: split scoring scans them in one pass
  std::sort(pos.begin(), pos.end(), [&](std::uint32_t a, std::uint32_t b) {
    const double ta = data.records[data.orig[a]].time;
    const double tb = data.records[data.orig[b]].time;
    if (ta != tb) return ta < tb;
    return a < b;
  });

  SplitChoice choice;
  const bool depth_ok = config.max_depth == 0 || depth < config.max_depth;
  if (depth_ok) choice = find_split(data, pos, config, rng);

  const auto index = static_cast<std::int32_t>(tree.nodes.size());
  tree.nodes.emplace_back();
  if (!choice.found) {
    auto& node = tree.nodes.back();
    node.curve = km_from_positions(data, pos);
    node.n_samples = pos.size();
    return index;
  }

  tree.nodes[index].feature_index = static_cast<int>(choice.feature);
  tree.nodes[index].threshold = choice.threshold;
  std::vector<std::uint32_t> left_pos, right_pos;
  for (auto p : pos) {
    if (covariate_at(data, p, choice.feature) < choice.threshold) {
      left_pos.push_back(p);
    } else {
      right_pos.push_back(p);
    }
  }
  pos.clear();
  pos.shrink_to_fit();
  const auto left = build_node(tree, data, left_pos, depth + 1, config, rng);
  tree.nodes[index].left = left;
  const auto right = build_node(tree, data, right_pos, depth + 1, config, rng);
  tree.nodes[index].right = right;
  return index;
}

ForestConfig resolve_config(const ForestConfig& config, std::size_t p) {
  ForestConfig out = config;
  if (out.n_trees == 0) throw std::invalid_argument("n_trees must be positive");
  if (out.min_leaf == 0) throw std::invalid_argument("min_leaf must be positive");
  if (out.min_events_leaf > out.min_leaf) {
    throw std::invalid_argument("min_events_leaf cannot exceed min_leaf");
  }
  if (out.n_split_candidates == 0) {
    throw std::invalid_argument("n_split_candidates must be positive");
  }
  if (out.mtry == 0) {
    out.mtry = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(p))));
  }
  if (out.mtry > p) out.mtry = p;
  return out;
}

void check_trainable(std::span<const SurvivalRecord> records, const ForestConfig& config) {
  if (records.size() < 2 * config.min_leaf) {
    throw std::invalid_argument("too few records: need at least 2*min_leaf");
  }
  bool any_event = false;
  for (const auto& r : records) {
    if (r.event != 0) {
      any_event = true;
      break;
    }
  }
  if (!any_event) throw std::invalid_argument("no events in training data");
}

SurvivalTree fit_tree_on(const TreeData& data, const ForestConfig& config,
                         std::mt19937_64& rng) {
  SurvivalTree tree;
  std::vector<std::uint32_t> pos(data.orig.size());
  std::iota(pos.begin(), pos.end(), std::uint32_t{0});
  build_node(tree, data, pos, 0, config, rng);
  return tree;
}

// Step evaluation of a leaf curve onto an ascending grid, accumulated into acc.
void accumulate_on_grid(const SurvivalCurve& curve, std::span<const double> grid,
                        std::vector<double>& acc) {
  std::size_t k = 0;
  double value = 1.0;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    while (k < curve.times.size() && curve.times[k] <= grid[g]) {
      value = curve.probs[k];
      ++k;
    }
    acc[g] += value;
  }
}

const SurvivalCurve& route_to_leaf(const SurvivalTree& tree, std::span<const double> covariates) {
  std::int32_t at = 0;
  while (!tree.nodes[static_cast<std::size_t>(at)].is_leaf()) {
    const auto& node = tree.nodes[static_cast<std::size_t>(at)];
    const double v = covariates[static_cast<std::size_t>(node.feature_index)];
    at = v < node.threshold ? node.left : node.right;
  }
  return tree.nodes[static_cast<std::size_t>(at)].curve;
}

}  // namespace

SurvivalTree fit_survival_tree(std::span<const SurvivalRecord> records,
                               const ForestConfig& config, std::mt19937_64& rng) {
  if (records.empty()) throw std::invalid_argument("empty cohort");
  const std::size_t p = records[0].covariates.size();
  const ForestConfig resolved = resolve_config(config, p);
  check_trainable(records, resolved);

  TreeData data;
  data.records = records;
  data.p = p;
  data.orig.resize(records.size());
  std::iota(data.orig.begin(), data.orig.end(), std::uint32_t{0});
  SurvivalTree tree = fit_tree_on(data, resolved, rng);
  tree.inbag_counts.assign(records.size(), 1);
  return tree;
}

SurvivalForest fit_survival_forest(std::span<const SurvivalRecord> records,
                                   const ForestConfig& config, std::uint64_t seed,
                                   unsigned n_threads) {
  if (records.empty()) throw std::invalid_argument("empty cohort");
  const std::size_t p = records[0].covariates.size();

  SurvivalForest forest;
  forest.config = resolve_config(config, p);
  check_trainable(records, forest.config);
  forest.seed = seed;
  forest.n_features = p;

  std::vector<double> event_times;
  for (const auto& r : records) {
    if (r.event != 0) event_times.push_back(r.time);
  }
  std::sort(event_times.begin(), event_times.end());
  event_times.erase(std::unique(event_times.begin(), event_times.end()), event_times.end());
  forest.time_grid = std::move(event_times);

  const std::size_t n = records.size();
  forest.trees.resize(forest.config.n_trees);
  parallel_for(forest.config.n_trees, n_threads, [&](std::size_t t) {
    auto rng = make_engine(seed, {t});
    TreeData data;
    data.records = records;
    data.p = p;
    data.orig.resize(n);
    std::vector<std::uint32_t> inbag(n, 0);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (std::size_t i = 0; i < n; ++i) {
      const auto drawn = static_cast<std::uint32_t>(pick(rng));
      data.orig[i] = drawn;
      inbag[drawn] += 1;
    }
    forest.trees[t] = fit_tree_on(data, forest.config, rng);
    forest.trees[t].inbag_counts = std::move(inbag);
  });
  return forest;
}

SurvivalCurve predict_survival(const SurvivalForest& forest, std::span<const double> covariates) {
  if (covariates.size() != forest.n_features) {
    throw std::invalid_argument("covariate length mismatch");
  }
  std::vector<double> acc(forest.time_grid.size(), 0.0);
  for (const auto& tree : forest.trees) {
    accumulate_on_grid(route_to_leaf(tree, covariates), forest.time_grid, acc);
  }
  SurvivalCurve out;
  out.times = forest.time_grid;
  out.probs.resize(acc.size());
  const double scale = 1.0 / static_cast<double>(forest.trees.size());
  double running_min = 1.0;
  for (std::size_t i = 0; i < acc.size(); ++i) {
    running_min = std::min(running_min, acc[i] * scale);
    out.probs[i] = running_min;
  }
  return out;
}

double oob_error(const SurvivalForest& forest, std::span<const SurvivalRecord> records) {
  for (const auto& tree : forest.trees) {
    if (tree.inbag_counts.size() != records.size()) {
      throw std::invalid_argument("records do not match the forest's training set");
    }
  }
  constexpr double kProbFloor = 1e-12;
  std::vector<double> scores;
  std::vector<SurvivalRecord> covered;
  std::vector<double> acc(forest.time_grid.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    std::fill(acc.begin(), acc.end(), 0.0);
    std::size_t n_oob = 0;
    for (const auto& tree : forest.trees) {
      if (tree.inbag_counts[i] != 0) continue;
      accumulate_on_grid(route_to_leaf(tree, records[i].covariates), forest.time_grid, acc);
      ++n_oob;
    }
    if (n_oob == 0) continue;
    double mortality = 0.0;
    for (double s : acc) {
      mortality += -std::log(std::max(s / static_cast<double>(n_oob), kProbFloor));
    }
    scores.push_back(mortality);
    covered.push_back(records[i]);
  }
  if (covered.empty()) throw std::invalid_argument("no OOB coverage");
  return 1.0 - concordance_index(scores, covered);
}

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json curve_to_json(const SurvivalCurve& curve) {
  return ordered_json{{"times", curve.times}, {"probs", curve.probs}};
}

SurvivalCurve curve_from_json(const ordered_json& j) {
  SurvivalCurve curve;
  curve.times = j.at("times").get<std::vector<double>>();
  curve.probs = j.at("probs").get<std::vector<double>>();
  return curve;
}

}  // namespace

std::string forest_to_json(const SurvivalForest& forest) {
  ordered_json j;
  j["config"] = {{"n_trees", forest.config.n_trees},
                 {"mtry", forest.config.mtry},
                 {"min_leaf", forest.config.min_leaf},
                 {"min_events_leaf", forest.config.min_events_leaf},
                 {"n_split_candidates", forest.config.n_split_candidates},
                 {"max_depth", forest.config.max_depth}};
  j["seed"] = forest.seed;
  j["n_features"] = forest.n_features;
  j["time_grid"] = forest.time_grid;
  ordered_json trees = ordered_json::array();
  for (const auto& tree : forest.trees) {
    ordered_json nodes = ordered_json::array();
    for (const auto& node : tree.nodes) {
      ordered_json n;
      n["feature"] = node.feature_index;
      n["threshold"] = node.threshold;
      n["left"] = node.left;
      n["right"] = node.right;
      if (node.is_leaf()) {
        n["n_samples"] = node.n_samples;
        n["curve"] = curve_to_json(node.curve);
      }
      nodes.push_back(std::move(n));
    }
    trees.push_back(ordered_json{{"inbag", tree.inbag_counts}, {"nodes", std::move(nodes)}});
  }
  j["trees"] = std::move(trees);
  return j.dump();
}

SurvivalForest forest_from_json(const std::string& text) {
  const auto j = ordered_json::parse(text);
  SurvivalForest forest;
  const auto& c = j.at("config");
  forest.config.n_trees = c.at("n_trees").get<std::size_t>();
  forest.config.mtry = c.at("mtry").get<std::size_t>();
  forest.config.min_leaf = c.at("min_leaf").get<std::size_t>();
  forest.config.min_events_leaf = c.at("min_events_leaf").get<std::size_t>();
  forest.config.n_split_candidates = c.at("n_split_candidates").get<std::size_t>();
  forest.config.max_depth = c.at("max_depth").get<std::size_t>();
  forest.seed = j.at("seed").get<std::uint64_t>();
  forest.n_features = j.at("n_features").get<std::size_t>();
  forest.time_grid = j.at("time_grid").get<std::vector<double>>();
  for (const auto& jt : j.at("trees")) {
    SurvivalTree tree;
    tree.inbag_counts = jt.at("inbag").get<std::vector<std::uint32_t>>();
    for (const auto& jn : jt.at("nodes")) {
      SurvivalTreeNode node;
      node.feature_index = jn.at("feature").get<int>();
      node.threshold = jn.at("threshold").get<double>();
      node.left = jn.at("left").get<std::int32_t>();
      node.right = jn.at("right").get<std::int32_t>();
      if (node.is_leaf()) {
        node.n_samples = jn.at("n_samples").get<std::size_t>();
        node.curve = curve_from_json(jn.at("curve"));
      }
      tree.nodes.push_back(std::move(node));
    }
    forest.trees.push_back(std::move(tree));
  }
  return forest;
}

}  // namespace causalsurv
