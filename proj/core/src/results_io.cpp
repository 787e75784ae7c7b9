#include "causalsurv/results_io.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "causalsurv/svg_plot.hpp"
#include "text_util.hpp"

namespace fs = std::filesystem;

namespace causalsurv {

namespace {

using ordered_json = nlohmann::ordered_json;

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string scope_name(FeatureScope scope) {
  return scope == FeatureScope::tree_features ? "tree_features" : "all_features";
}

FeatureScope scope_from_name(const std::string& name) {
  if (name == "tree_features") return FeatureScope::tree_features;
  if (name == "all_features") return FeatureScope::all_features;
  throw std::runtime_error("unknown feature_scope: " + name);
}

ordered_json config_to_ordered(const PipelineConfig& config) {
  ordered_json j;
  j["causal"] = {{"honest", config.causal.honest},
                 {"min_treated_leaf", config.causal.min_treated_leaf},
                 {"min_control_leaf", config.causal.min_control_leaf},
                 {"max_depth", config.causal.max_depth},
                 {"min_effect_gain", config.causal.min_effect_gain},
                 {"random_split_candidates", config.causal.random_split_candidates},
                 {"n_split_candidates", config.causal.n_split_candidates},
                 {"uncensored_only", config.causal.uncensored_only}};
  j["forest"] = {{"n_trees", config.forest.n_trees},
                 {"mtry", config.forest.mtry},
                 {"min_leaf", config.forest.min_leaf},
                 {"min_events_leaf", config.forest.min_events_leaf},
                 {"n_split_candidates", config.forest.n_split_candidates},
                 {"max_depth", config.forest.max_depth}};
  j["ate_threshold"] = config.ate_threshold;
  j["horizon"] = config.horizon;
  j["feature_scope"] = scope_name(config.feature_scope);
  j["test_fraction"] = config.test_fraction;
  j["seed"] = config.seed;
  return j;
}

PipelineConfig config_from_ordered(const ordered_json& j) {
  PipelineConfig config;
  for (const auto& [key, value] : j.items()) {
    if (key == "causal") {
      for (const auto& [ckey, cval] : value.items()) {
        if (ckey == "honest") {
          config.causal.honest = cval.get<bool>();
        } else if (ckey == "min_treated_leaf") {
          config.causal.min_treated_leaf = cval.get<std::size_t>();
        } else if (ckey == "min_control_leaf") {
          config.causal.min_control_leaf = cval.get<std::size_t>();
        } else if (ckey == "max_depth") {
          config.causal.max_depth = cval.get<std::size_t>();
        } else if (ckey == "min_effect_gain") {
          config.causal.min_effect_gain = cval.get<double>();
        } else if (ckey == "random_split_candidates") {
          config.causal.random_split_candidates = cval.get<bool>();
        } else if (ckey == "n_split_candidates") {
          config.causal.n_split_candidates = cval.get<std::size_t>();
        } else if (ckey == "uncensored_only") {
          config.causal.uncensored_only = cval.get<bool>();
        } else {
          throw std::runtime_error("unknown config key: causal." + ckey);
        }
      }
    } else if (key == "forest") {
      for (const auto& [fkey, fval] : value.items()) {
        if (fkey == "n_trees") {
          config.forest.n_trees = fval.get<std::size_t>();
        } else if (fkey == "mtry") {
          config.forest.mtry = fval.get<std::size_t>();
        } else if (fkey == "min_leaf") {
          config.forest.min_leaf = fval.get<std::size_t>();
        } else if (fkey == "min_events_leaf") {
          config.forest.min_events_leaf = fval.get<std::size_t>();
        } else if (fkey == "n_split_candidates") {
          config.forest.n_split_candidates = fval.get<std::size_t>();
        } else if (fkey == "max_depth") {
          config.forest.max_depth = fval.get<std::size_t>();
        } else {
          throw std::runtime_error("unknown config key: forest." + fkey);
        }
      }
    } else if (key == "ate_threshold") {
      config.ate_threshold = value.get<double>();
    } else if (key == "horizon") {
      config.horizon = value.get<double>();
    } else if (key == "feature_scope") {
      config.feature_scope = scope_from_name(value.get<std::string>());
    } else if (key == "test_fraction") {
      config.test_fraction = value.get<double>();
    } else if (key == "seed") {
      config.seed = value.get<std::uint64_t>();
    } else {
      throw std::runtime_error("unknown config key: " + key);
    }
  }
  return config;
}

void append_curve_rows(std::ostream& out, int leaf_id, const std::string& patient_id, int arm,
                       std::span<const double> times, std::span<const double> values) {
  for (std::size_t k = 0; k < times.size(); ++k) {
    out << leaf_id << ',' << patient_id << ',' << arm << ',' << detail::format_double(times[k])
        << ',' << detail::format_double(values[k]) << '\n';
  }
}

std::string curves_csv(const LeafResult& leaf, int arm) {
  std::ostringstream out;
  out << "leaf_id,patient_id,arm,time,survival\n";
  const int leaf_id = leaf.report.leaf_id;
  const auto& km = arm == 0 ? leaf.leaf_km_t0 : leaf.leaf_km_t1;
  append_curve_rows(out, leaf_id, "cohort", arm, km.times, km.probs);
  for (const auto& pr : leaf.patient_results) {
    const auto& curve = arm == 0 ? pr.curve_t0 : pr.curve_t1;
    append_curve_rows(out, leaf_id, pr.patient_id, arm, curve.times, curve.probs);
  }
  return out.str();
}

std::string diff_csv(const LeafResult& leaf) {
  std::ostringstream out;
  out << "leaf_id,patient_id,arm,time,survival,delta\n";
  for (const auto& pr : leaf.patient_results) {
    for (std::size_t k = 0; k < pr.diff.times.size(); ++k) {
      const double t = pr.diff.times[k];
      out << leaf.report.leaf_id << ',' << pr.patient_id << ',' << pr.arm << ','
          << detail::format_double(t) << ',' << detail::format_double(pr.curve_t1(t)) << ','
          << detail::format_double(pr.diff.deltas[k]) << '\n';
    }
  }
  return out.str();
}

struct CsvCurve {
  std::string patient_id;
  std::vector<double> times;
  std::vector<double> values;
};

// Groups rows by patient_id in encounter order; the value column is selected
// by index (4 = survival, 5 = delta).
std::vector<CsvCurve> parse_curve_csv(const fs::path& path, std::size_t value_col) {
  std::vector<CsvCurve> curves;
  std::map<std::string, std::size_t> index;
  std::istringstream in(read_text_file(path));
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = detail::split_csv_line(line);
    if (fields.size() <= value_col) {
      throw std::runtime_error("malformed curve row in " + path.string());
    }
    auto [it, inserted] = index.try_emplace(fields[1], curves.size());
    if (inserted) curves.push_back({fields[1], {}, {}});
    auto& c = curves[it->second];
    c.times.push_back(detail::parse_double(fields[3]));
    c.values.push_back(detail::parse_double(fields[value_col]));
  }
  return curves;
}

PlotSeries survival_series(const CsvCurve& curve, const std::string& label,
                           const std::string& color) {
  PlotSeries s{label, color, {0.0}, {1.0}};
  s.times.insert(s.times.end(), curve.times.begin(), curve.times.end());
  s.values.insert(s.values.end(), curve.values.begin(), curve.values.end());
  return s;
}

}  // namespace

std::string summary_json(const PipelineResult& result) {
  ordered_json j;
  j["root_ate"] = result.root_ate;
  j["median_t0"] = result.median_t0 ? ordered_json(*result.median_t0) : ordered_json(nullptr);
  j["median_t1"] = result.median_t1 ? ordered_json(*result.median_t1) : ordered_json(nullptr);
  if (result.median_t0 && result.median_t1) {
    j["median_diff"] = *result.median_t1 - *result.median_t0;
  } else {
    j["median_diff"] = nullptr;
  }
  j["horizon"] = result.horizon;
  j["feature_scope"] = scope_name(result.config.feature_scope);
  j["scope_features"] = result.scope_features;
  j["feature_names"] = result.feature_names;
  j["config"] = config_to_ordered(result.config);
  j["leaves"] = ordered_json::array();
  for (const auto& leaf : result.leaf_results) {
    ordered_json l;
    l["leaf_id"] = leaf.report.leaf_id;
    l["tau_hat"] = leaf.report.tau_hat;
    l["n_treated"] = leaf.report.n_treated;
    l["n_control"] = leaf.report.n_control;
    l["path"] = ordered_json::array();
    for (const auto& cond : leaf.report.path) {
      l["path"].push_back({{"feature", cond.feature},
                           {"relation", cond.geq ? ">=" : "<"},
                           {"threshold", cond.threshold}});
    }
    l["fitted"] = leaf.fitted;
    l["skip_reason"] = leaf.fitted ? ordered_json(nullptr) : ordered_json(leaf.skip_reason);
    l["n_patients"] = leaf.patient_results.size();
    l["mean_rmst_diff"] = leaf.fitted ? ordered_json(leaf.mean_rmst_diff) : ordered_json(nullptr);
    j["leaves"].push_back(std::move(l));
  }
  j["provenance"] = {{"seed", result.provenance.seed},
                     {"config_hash", result.provenance.config_hash},
                     {"dataset_fingerprint", result.provenance.dataset_fingerprint},
                     {"n_records", result.provenance.n_records}};
  return j.dump(2) + "\n";
}

void write_results(const std::string& dir, const PipelineResult& result) {
  const fs::path root(dir);
  fs::create_directories(root);
  write_text_file(root / "tree.dot", tree_to_dot(result.tree, result.feature_names));
  write_text_file(root / "tree.json", tree_to_json(result.tree));
  write_text_file(root / "summary.json", summary_json(result));
  for (const auto& leaf : result.leaf_results) {
    const fs::path leaf_dir = root / "leaves" / std::to_string(leaf.report.leaf_id);
    fs::create_directories(leaf_dir);
    write_text_file(leaf_dir / "curves_t0.csv", curves_csv(leaf, 0));
    write_text_file(leaf_dir / "curves_t1.csv", curves_csv(leaf, 1));
    write_text_file(leaf_dir / "diff.csv", diff_csv(leaf));
    if (leaf.fitted) {
      write_text_file(leaf_dir / "forest_t0.json", forest_to_json(leaf.forest_t0));
      write_text_file(leaf_dir / "forest_t1.json", forest_to_json(leaf.forest_t1));
    }
  }
}

PipelineResult load_results(const std::string& dir) {
  const fs::path root(dir);
  PipelineResult result;
  result.tree = tree_from_json(read_text_file(root / "tree.json"));

  const auto j = ordered_json::parse(read_text_file(root / "summary.json"));
  result.root_ate = j.at("root_ate").get<double>();
  if (!j.at("median_t0").is_null()) result.median_t0 = j.at("median_t0").get<double>();
  if (!j.at("median_t1").is_null()) result.median_t1 = j.at("median_t1").get<double>();
  result.horizon = j.at("horizon").get<double>();
  result.scope_features = j.at("scope_features").get<std::vector<std::size_t>>();
  result.feature_names = j.at("feature_names").get<std::vector<std::string>>();
  result.config = config_from_ordered(j.at("config"));
  result.provenance.seed = j.at("provenance").at("seed").get<std::uint64_t>();
  result.provenance.config_hash = j.at("provenance").at("config_hash").get<std::string>();
  result.provenance.dataset_fingerprint =
      j.at("provenance").at("dataset_fingerprint").get<std::string>();
  result.provenance.n_records = j.at("provenance").at("n_records").get<std::size_t>();

  for (const auto& l : j.at("leaves")) {
    LeafResult leaf;
    leaf.report.leaf_id = l.at("leaf_id").get<int>();
    leaf.report.tau_hat = l.at("tau_hat").get<double>();
    leaf.report.n_treated = l.at("n_treated").get<std::size_t>();
    leaf.report.n_control = l.at("n_control").get<std::size_t>();
    for (const auto& cond : l.at("path")) {
      leaf.report.path.push_back({cond.at("feature").get<std::string>(),
                                  cond.at("relation").get<std::string>() == ">=",
                                  cond.at("threshold").get<double>()});
    }
    leaf.fitted = l.at("fitted").get<bool>();
    if (!l.at("skip_reason").is_null()) leaf.skip_reason = l.at("skip_reason").get<std::string>();
    if (!l.at("mean_rmst_diff").is_null()) {
      leaf.mean_rmst_diff = l.at("mean_rmst_diff").get<double>();
    }
    if (leaf.fitted) {
      const fs::path leaf_dir = root / "leaves" / std::to_string(leaf.report.leaf_id);
      leaf.forest_t0 = forest_from_json(read_text_file(leaf_dir / "forest_t0.json"));
      leaf.forest_t1 = forest_from_json(read_text_file(leaf_dir / "forest_t1.json"));
    }
    result.leaf_results.push_back(std::move(leaf));
  }
  return result;
}

std::string pipeline_config_to_json(const PipelineConfig& config) {
  return config_to_ordered(config).dump(2) + "\n";
}

PipelineConfig pipeline_config_from_json(const std::string& text) {
  return config_from_ordered(ordered_json::parse(text));
}

PipelineConfig load_pipeline_config(const std::string& path) {
  return pipeline_config_from_json(read_text_file(path));
}

std::string ground_truth_to_json(const GroundTruth& truth) {
  ordered_json j;
  j["subgroups"] = ordered_json::array();
  for (const auto& sg : truth.subgroups) {
    j["subgroups"].push_back({{"name", sg.name},
                              {"hazard_t0", sg.hazard_t0},
                              {"hazard_t1", sg.hazard_t1},
                              {"median_t0", sg.median_t0},
                              {"median_t1", sg.median_t1}});
  }
  return j.dump(2) + "\n";
}

std::size_t write_plots(const std::string& dir) {
  const fs::path root(dir);
  const fs::path leaves_dir = root / "leaves";
  if (!fs::is_directory(leaves_dir)) throw std::runtime_error("no leaves directory in " + dir);

  std::vector<int> leaf_ids;
  for (const auto& entry : fs::directory_iterator(leaves_dir)) {
    if (entry.is_directory()) leaf_ids.push_back(std::stoi(entry.path().filename().string()));
  }
  std::sort(leaf_ids.begin(), leaf_ids.end());

  const fs::path plots_dir = root / "plots";
  fs::create_directories(plots_dir);
  std::size_t written = 0;
  for (int leaf_id : leaf_ids) {
    const fs::path leaf_dir = leaves_dir / std::to_string(leaf_id);
    const auto t0 = parse_curve_csv(leaf_dir / "curves_t0.csv", 4);
    const auto t1 = parse_curve_csv(leaf_dir / "curves_t1.csv", 4);
    const auto diffs = parse_curve_csv(leaf_dir / "diff.csv", 5);
    const std::string tag = "leaf" + std::to_string(leaf_id);

    std::vector<PlotSeries> km;
    std::vector<PlotSeries> patients;
    for (const auto* curves : {&t0, &t1}) {
      const bool arm1 = curves == &t1;
      const std::string color = arm1 ? "#d62728" : "#1f77b4";
      const std::string label = arm1 ? "arm 1" : "arm 0";
      for (const auto& c : *curves) {
        if (c.patient_id == "cohort") {
          km.push_back(survival_series(c, label + " (KM)", color));
        } else {
          patients.push_back(survival_series(c, label, color));
        }
      }
    }
    if (!km.empty()) {
      write_text_file(plots_dir / (tag + "_km_overlay.svg"),
                      step_plot_svg(tag + " arm survival", km, 0.0, 1.0));
      ++written;
    }
    if (!patients.empty()) {
      write_text_file(plots_dir / (tag + "_patient_overlay.svg"),
                      step_plot_svg(tag + " held-out patient curves", patients, 0.0, 1.0));
      ++written;
    }
    if (!diffs.empty()) {
      double span = 0.0;
      std::vector<PlotSeries> delta_series;
      for (const auto& c : diffs) {
        PlotSeries s{"S1 - S0", "#7a4fa3", {0.0}, {0.0}};
        s.times.insert(s.times.end(), c.times.begin(), c.times.end());
        s.values.insert(s.values.end(), c.values.begin(), c.values.end());
        for (double v : c.values) span = std::max(span, std::abs(v));
        delta_series.push_back(std::move(s));
      }
      if (span == 0.0) span = 0.1;
      write_text_file(plots_dir / (tag + "_patient_diff.svg"),
                      step_plot_svg(tag + " per-patient survival difference", delta_series, -span,
                                    span));
      ++written;
    }
  }
  return written;
}

}  // namespace causalsurv
