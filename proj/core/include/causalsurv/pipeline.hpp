#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "causalsurv/causal_tree.hpp"
#include "causalsurv/survival_core.hpp"
#include "causalsurv/survival_forest.hpp"

namespace causalsurv {

enum class FeatureScope { tree_features, all_features };

struct PipelineConfig {
  CausalTreeConfig causal;
  ForestConfig forest;
  double ate_threshold = 0.0;
  double horizon = 0.0;  // 0 = resolve to the max observed event time
  FeatureScope feature_scope = FeatureScope::tree_features;
  double test_fraction = 0.2;  // held out per leaf-arm for the prediction demo
  std::uint64_t seed = 0;
};

struct PatientResult {
  std::string patient_id;
  int arm = 0;  // the arm the patient was actually observed under
  SurvivalCurve curve_t0;
  SurvivalCurve curve_t1;
  DifferenceCurve diff;
  double rmst_diff = 0.0;
};

struct LeafResult {
  LeafReport report;
  bool fitted = false;
  std::string skip_reason;  // set when not fitted
  SurvivalForest forest_t0;
  SurvivalForest forest_t1;
  std::vector<PatientResult> patient_results;  // held-out patients, both arms
  SurvivalCurve leaf_km_t0;
  SurvivalCurve leaf_km_t1;
  double mean_rmst_diff = 0.0;
};

struct Provenance {
  std::uint64_t seed = 0;
  std::string config_hash;
  std::string dataset_fingerprint;
  std::size_t n_records = 0;
};

struct PipelineResult {
  CausalTree tree;
  std::vector<std::string> feature_names;
  double root_ate = 0.0;
  std::optional<double> median_t0;
  std::optional<double> median_t1;
  double horizon = 0.0;                      // resolved RMST horizon
  std::vector<std::size_t> scope_features;   // dataset feature indices the forests see
  std::vector<LeafResult> leaf_results;      // one per selected leaf, by leaf_id
  PipelineConfig config;
  Provenance provenance;
};

struct NewPatientPrediction {
  int leaf_id = -1;
  SurvivalCurve curve_t0;
  SurvivalCurve curve_t1;
  DifferenceCurve diff;
  double rmst_diff = 0.0;
};

// Thrown when a probe routes to a leaf without fitted forests.
class NoFittedModelError : public std::runtime_error {
 public:
  NoFittedModelError(LeafReport report, const std::string& reason)
      : std::runtime_error("no fitted model for leaf " + std::to_string(report.leaf_id) +
                           (reason.empty() ? "" : " (" + reason + ")")),
        report_(std::move(report)) {}
  const LeafReport& report() const { return report_; }

 private:
  LeafReport report_;
};

struct BaselineResult {
  std::optional<double> median_t0;
  std::optional<double> median_t1;
  std::optional<double> median_diff;
};

// Step 1 fits the causal tree; step 2 fits twin survival forests per selected
// leaf on all leaf-assigned records minus a per-arm held-out fraction, then
// predicts both curves for each held-out patient. A leaf whose arms cannot
// support a forest after the holdout is reported with a skip reason instead
// of fitted. Thread count never changes the result.
PipelineResult run_two_step(std::span<const SurvivalRecord> records, const PipelineConfig& config,
                            std::vector<std::string> feature_names = {}, unsigned n_threads = 1);

NewPatientPrediction predict_new_patient(const PipelineResult& result,
                                         std::span<const double> covariates);

// Arm-wise KM medians and their difference, the whole-population naive baseline.
BaselineResult population_baseline(std::span<const SurvivalRecord> records);

// Per-arm training records needed for a leaf to be fitted, after the holdout.
std::size_t leaf_viability_floor(const ForestConfig& forest);

// FNV-1a 64 over a canonical serialization, as lowercase hex.
std::string dataset_fingerprint(std::span<const SurvivalRecord> records);
std::string config_hash(const PipelineConfig& config);

}  // namespace causalsurv
