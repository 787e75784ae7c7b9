#include "causalsurv/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "causalsurv/rng.hpp"
#include "text_util.hpp"

namespace causalsurv {

namespace {

std::vector<SurvivalRecord> gather(const std::vector<SurvivalRecord>& recs,
                                   const std::vector<std::size_t>& idx) {
  std::vector<SurvivalRecord> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(recs[i]);
  return out;
}

std::vector<double> slice_covariates(std::span<const double> covariates,
                                     const std::vector<std::size_t>& scope) {
  std::vector<double> out;
  out.reserve(scope.size());
  for (auto f : scope) out.push_back(covariates[f]);
  return out;
}

std::vector<SurvivalRecord> slice_records(const std::vector<SurvivalRecord>& recs,
                                          const std::vector<std::size_t>& idx,
                                          const std::vector<std::size_t>& scope) {
  std::vector<SurvivalRecord> out;
  out.reserve(idx.size());
  for (auto i : idx) {
    SurvivalRecord r = recs[i];
    r.covariates = slice_covariates(r.covariates, scope);
    out.push_back(std::move(r));
  }
  return out;
}

// Seeded per-arm holdout: returns (train, holdout) index lists, both ascending.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_holdout(
    const std::vector<std::size_t>& arm_idx, double test_fraction, std::uint64_t seed,
    std::initializer_list<std::uint64_t> path) {
  const auto holdout_n =
      static_cast<std::size_t>(std::floor(static_cast<double>(arm_idx.size()) * test_fraction));
  std::vector<std::size_t> shuffled = arm_idx;
  auto rng = make_engine(seed, path);
  partial_shuffle(shuffled, holdout_n, rng);
  std::vector<std::size_t> holdout(shuffled.begin(),
                                   shuffled.begin() + static_cast<std::ptrdiff_t>(holdout_n));
  std::vector<std::size_t> train(shuffled.begin() + static_cast<std::ptrdiff_t>(holdout_n),
                                 shuffled.end());
  std::sort(holdout.begin(), holdout.end());
  std::sort(train.begin(), train.end());
  return {std::move(train), std::move(holdout)};
}

std::size_t count_events(const std::vector<SurvivalRecord>& recs,
                         const std::vector<std::size_t>& idx) {
  std::size_t events = 0;
  for (auto i : idx) events += static_cast<std::size_t>(recs[i].event != 0);
  return events;
}

}  // namespace

std::size_t leaf_viability_floor(const ForestConfig& forest) {
  return std::max<std::size_t>(2 * forest.min_leaf, 30);
}

PipelineResult run_two_step(std::span<const SurvivalRecord> records, const PipelineConfig& config,
                            std::vector<std::string> feature_names, unsigned n_threads) {
  if (records.empty()) throw std::invalid_argument("empty cohort");
  if (!(config.test_fraction > 0.0 && config.test_fraction < 1.0)) {
    throw std::invalid_argument("test_fraction must be in (0,1)");
  }
  if (config.horizon < 0.0) throw std::invalid_argument("horizon must be positive");
  if (config.ate_threshold < 0.0) {
    throw std::invalid_argument("ate_threshold must be nonnegative");
  }

  std::vector<SurvivalRecord> recs(records.begin(), records.end());
  std::sort(recs.begin(), recs.end(),
            [](const SurvivalRecord& a, const SurvivalRecord& b) { return a.id < b.id; });

  PipelineResult result;
  result.config = config;
  result.provenance.seed = config.seed;
  result.provenance.n_records = recs.size();
  result.provenance.dataset_fingerprint = dataset_fingerprint(recs);
  result.provenance.config_hash = config_hash(config);

  if (config.horizon > 0.0) {
    result.horizon = config.horizon;
  } else {
    double max_event_time = 0.0, max_time = 0.0;
    for (const auto& r : recs) {
      max_time = std::max(max_time, r.time);
      if (r.event != 0) max_event_time = std::max(max_event_time, r.time);
    }
    result.horizon = max_event_time > 0.0 ? max_event_time : max_time;
    if (!(result.horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
  }

  result.tree = fit_causal_tree(recs, config.causal, derive_seed(config.seed, {1}));
  result.root_ate = result.tree.root_ate;

  const std::size_t p = result.tree.n_features;
  if (feature_names.empty()) {
    for (std::size_t f = 0; f < p; ++f) feature_names.push_back("x" + std::to_string(f));
  }
  if (feature_names.size() != p) {
    throw std::invalid_argument("feature name count does not match covariate count");
  }
  result.feature_names = std::move(feature_names);

  if (config.feature_scope == FeatureScope::tree_features) {
    result.scope_features = tree_split_features(result.tree);
  } else {
    result.scope_features.resize(p);
    std::iota(result.scope_features.begin(), result.scope_features.end(), std::size_t{0});
  }

  const auto baseline = population_baseline(recs);
  result.median_t0 = baseline.median_t0;
  result.median_t1 = baseline.median_t1;

  const auto selected = select_leaves(result.tree, config.ate_threshold);
  const auto reports = extract_leaf_reports(result.tree, result.feature_names);

  std::vector<std::vector<std::size_t>> members(result.tree.n_leaves);
  for (std::size_t i = 0; i < recs.size(); ++i) {
    members[static_cast<std::size_t>(leaf_assign(result.tree, recs[i].covariates))].push_back(i);
  }

  const std::size_t floor_n = leaf_viability_floor(config.forest);
  for (int leaf_id : selected) {
    LeafResult leaf;
    leaf.report = reports[static_cast<std::size_t>(leaf_id)];

    std::vector<std::size_t> arm_idx[2];
    for (auto i : members[static_cast<std::size_t>(leaf_id)]) {
      arm_idx[recs[i].treatment == 1 ? 1 : 0].push_back(i);
    }
    leaf.leaf_km_t0 = arm_idx[0].empty() ? SurvivalCurve{} : km_estimate(gather(recs, arm_idx[0]));
    leaf.leaf_km_t1 = arm_idx[1].empty() ? SurvivalCurve{} : km_estimate(gather(recs, arm_idx[1]));

    std::vector<std::size_t> train_idx[2], holdout_idx[2];
    std::string skip;
    for (int arm = 0; arm < 2 && skip.empty(); ++arm) {
      std::tie(train_idx[arm], holdout_idx[arm]) =
          split_holdout(arm_idx[arm], config.test_fraction, config.seed,
                        {2, static_cast<std::uint64_t>(leaf_id), static_cast<std::uint64_t>(arm)});
      if (train_idx[arm].size() < floor_n) {
        skip = "arm " + std::to_string(arm) + " has only " +
               std::to_string(train_idx[arm].size()) + " of " + std::to_string(floor_n) +
               " required training records after holdout";
      } else if (count_events(recs, train_idx[arm]) == 0) {
        skip = "arm " + std::to_string(arm) + " has no events among its training records";
      }
    }
    if (!skip.empty()) {
      leaf.skip_reason = std::move(skip);
      result.leaf_results.push_back(std::move(leaf));
      continue;
    }

    SurvivalForest* forests[2] = {&leaf.forest_t0, &leaf.forest_t1};
    for (int arm = 0; arm < 2; ++arm) {
      const auto train = slice_records(recs, train_idx[arm], result.scope_features);
      *forests[arm] = fit_survival_forest(
          train, config.forest,
          derive_seed(config.seed,
                      {3, static_cast<std::uint64_t>(leaf_id), static_cast<std::uint64_t>(arm)}),
          n_threads);
    }

    std::vector<std::size_t> held;
    std::merge(holdout_idx[0].begin(), holdout_idx[0].end(), holdout_idx[1].begin(),
               holdout_idx[1].end(), std::back_inserter(held));
    double rmst_diff_sum = 0.0;
    for (auto i : held) {
      PatientResult pr;
      pr.patient_id = recs[i].id;
      pr.arm = recs[i].treatment;
      const auto sliced = slice_covariates(recs[i].covariates, result.scope_features);
      pr.curve_t0 = predict_survival(leaf.forest_t0, sliced);
      pr.curve_t1 = predict_survival(leaf.forest_t1, sliced);
      pr.diff = curve_diff(pr.curve_t1, pr.curve_t0);
      pr.rmst_diff = rmst_diff(pr.curve_t1, pr.curve_t0, result.horizon);
      rmst_diff_sum += pr.rmst_diff;
      leaf.patient_results.push_back(std::move(pr));
    }
    leaf.fitted = true;
    leaf.mean_rmst_diff =
        held.empty() ? 0.0 : rmst_diff_sum / static_cast<double>(held.size());
    result.leaf_results.push_back(std::move(leaf));
  }
  return result;
}

NewPatientPrediction predict_new_patient(const PipelineResult& result,
                                         std::span<const double> covariates) {
  if (covariates.size() != result.tree.n_features) {
    throw std::invalid_argument("covariate length mismatch");
  }
  const int leaf_id = leaf_assign(result.tree, covariates);
  const LeafResult* leaf = nullptr;
  for (const auto& lr : result.leaf_results) {
    if (lr.report.leaf_id == leaf_id) {
      leaf = &lr;
      break;
    }
  }
  if (leaf == nullptr) {
    const auto reports = extract_leaf_reports(result.tree, result.feature_names);
    throw NoFittedModelError(reports[static_cast<std::size_t>(leaf_id)], "leaf not selected");
  }
  if (!leaf->fitted) throw NoFittedModelError(leaf->report, leaf->skip_reason);

  NewPatientPrediction out;
  out.leaf_id = leaf_id;
  const auto sliced = slice_covariates(covariates, result.scope_features);
  out.curve_t0 = predict_survival(leaf->forest_t0, sliced);
  out.curve_t1 = predict_survival(leaf->forest_t1, sliced);
  out.diff = curve_diff(out.curve_t1, out.curve_t0);
  out.rmst_diff = rmst_diff(out.curve_t1, out.curve_t0, result.horizon);
  return out;
}

BaselineResult population_baseline(std::span<const SurvivalRecord> records) {
  std::vector<SurvivalRecord> arms[2];
  for (const auto& r : records) arms[r.treatment == 1 ? 1 : 0].push_back(r);
  if (arms[0].empty() || arms[1].empty()) {
    throw std::invalid_argument("both treatments required");
  }
  BaselineResult out;
  out.median_t0 = median_survival(km_estimate(arms[0]));
  out.median_t1 = median_survival(km_estimate(arms[1]));
  if (out.median_t0 && out.median_t1) out.median_diff = *out.median_t1 - *out.median_t0;
  return out;
}

std::string dataset_fingerprint(std::span<const SurvivalRecord> records) {
  std::vector<const SurvivalRecord*> sorted;
  sorted.reserve(records.size());
  for (const auto& r : records) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(),
            [](const SurvivalRecord* a, const SurvivalRecord* b) { return a->id < b->id; });
  std::string text;
  for (const auto* r : sorted) {
    text += r->id;
    text += '|';
    text += detail::format_double(r->time);
    text += '|';
    text += std::to_string(r->event);
    text += '|';
    text += std::to_string(r->treatment);
    text += '|';
    for (double c : r->covariates) {
      text += detail::format_double(c);
      text += ',';
    }
    text += ';';
  }
  return detail::hex64(detail::fnv1a64(text));
}

std::string config_hash(const PipelineConfig& config) {
  std::string text;
  auto add = [&text](const std::string& key, const std::string& value) {
    text += key;
    text += '=';
    text += value;
    text += ';';
  };
  add("honest", config.causal.honest ? "1" : "0");
  add("min_treated_leaf", std::to_string(config.causal.min_treated_leaf));
  add("min_control_leaf", std::to_string(config.causal.min_control_leaf));
  add("causal_max_depth", std::to_string(config.causal.max_depth));
  add("min_effect_gain", detail::format_double(config.causal.min_effect_gain));
  add("random_split_candidates", config.causal.random_split_candidates ? "1" : "0");
  add("causal_n_split_candidates", std::to_string(config.causal.n_split_candidates));
  add("uncensored_only", config.causal.uncensored_only ? "1" : "0");
  add("n_trees", std::to_string(config.forest.n_trees));
  add("mtry", std::to_string(config.forest.mtry));
  add("min_leaf", std::to_string(config.forest.min_leaf));
  add("min_events_leaf", std::to_string(config.forest.min_events_leaf));
  add("forest_n_split_candidates", std::to_string(config.forest.n_split_candidates));
  add("forest_max_depth", std::to_string(config.forest.max_depth));
  add("ate_threshold", detail::format_double(config.ate_threshold));
  add("horizon", detail::format_double(config.horizon));
  add("feature_scope",
      config.feature_scope == FeatureScope::tree_features ? "tree_features" : "all_features");
  add("test_fraction", detail::format_double(config.test_fraction));
  add("seed", std::to_string(config.seed));
  return detail::hex64(detail::fnv1a64(text));
}

}  // namespace causalsurv
