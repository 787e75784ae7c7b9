#pragma once

#include <string>

#include "causalsurv/datagen.hpp"
#include "causalsurv/pipeline.hpp"

namespace causalsurv {

// Results directory layout:
//   tree.dot, tree.json, summary.json
//   leaves/<leaf_id>/curves_t0.csv, curves_t1.csv, diff.csv
//   leaves/<leaf_id>/forest_t0.json, forest_t1.json
// Curve CSVs hold the cohort KM rows (patient_id "cohort") plus the held-out
// patients' predicted curves; diff.csv adds a delta column.
void write_results(const std::string& dir, const PipelineResult& result);

// Reloads what prediction needs: tree, config, horizon, scope, leaf reports,
// and the fitted forests. Per-patient tables stay in the CSVs.
PipelineResult load_results(const std::string& dir);

// The exact bytes written to summary.json.
std::string summary_json(const PipelineResult& result);

std::string pipeline_config_to_json(const PipelineConfig& config);
PipelineConfig pipeline_config_from_json(const std::string& text);
PipelineConfig load_pipeline_config(const std::string& path);

std::string ground_truth_to_json(const GroundTruth& truth);

// Step-function SVG plots regenerated from the curve CSVs in dir, written to
// dir/plots/. Returns the number of files written.
std::size_t write_plots(const std::string& dir);

}  // namespace causalsurv
