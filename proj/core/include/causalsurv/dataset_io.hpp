#pragma once

#include <map>
#include <string>
#include <vector>

#include "causalsurv/survival_core.hpp"

namespace causalsurv {

// One covariate column. Plain numeric when codes and one_hot are both empty;
// ordinal-coded when codes is set; expanded to one indicator feature per
// listed category when one_hot is set.
struct CovariateColumn {
  std::string name;
  std::map<std::string, double> codes;
  std::vector<std::string> one_hot;
};

struct DatasetSchema {
  std::string id_column = "id";
  std::string time_column = "time";
  std::string event_column = "event";
  std::string treatment_column = "treatment";
  std::vector<CovariateColumn> covariates;
};

struct LoadReport {
  std::size_t n_rows = 0;
  std::size_t n_events = 0;
  std::size_t n_arm0 = 0;
  std::size_t n_arm1 = 0;
};

struct LoadedDataset {
  std::vector<SurvivalRecord> records;
  LoadReport report;
};

// All columns numeric covariates, standard id/time/event/treatment names.
DatasetSchema default_schema(const std::vector<std::string>& covariate_names);

// Post-encoding feature names: column name for numeric and ordinal columns,
// "name=category" for one-hot indicators.
std::vector<std::string> encoded_feature_names(const DatasetSchema& schema);

// Header-keyed CSV parsing; row order preserved. Errors name the offending
// row and column.
LoadedDataset load_dataset(const std::string& path, const DatasetSchema& schema);

// Plain numeric CSV: id,time,event,treatment,<feature names...>, floats at
// full round-trip precision. load_dataset(write_dataset(...)) is lossless.
void write_dataset(const std::string& path, std::span<const SurvivalRecord> records,
                   const std::vector<std::string>& covariate_names);

std::string schema_to_json(const DatasetSchema& schema);
DatasetSchema schema_from_json(const std::string& text);
DatasetSchema load_schema(const std::string& path);

}  // namespace causalsurv
