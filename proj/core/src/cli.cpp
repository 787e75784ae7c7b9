#include "causalsurv/cli.hpp"

#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "causalsurv/datagen.hpp"
#include "causalsurv/dataset_io.hpp"
#include "causalsurv/pipeline.hpp"
#include "causalsurv/results_io.hpp"
#include "text_util.hpp"

namespace causalsurv {

namespace {

using ordered_json = nlohmann::ordered_json;

// Default schema from the file header: every column beyond the standard four
// is a numeric covariate, in file order.
DatasetSchema sniff_schema(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty file: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  DatasetSchema schema;
  for (const auto& name : detail::split_csv_line(line)) {
    if (name != schema.id_column && name != schema.time_column && name != schema.event_column &&
        name != schema.treatment_column) {
      schema.covariates.push_back({name, {}, {}});
    }
  }
  return schema;
}

DatasetSchema resolve_schema(const std::string& schema_path, const std::string& data_path) {
  return schema_path.empty() ? sniff_schema(data_path) : load_schema(schema_path);
}

std::string optional_number(const std::optional<double>& v) {
  return v ? detail::format_double(*v) : "undefined";
}

std::string sanitize_cell(std::string text) {
  for (char& c : text) {
    if (c == ',' || c == '\n') c = ';';
  }
  return text;
}

void run_simulate(const std::string& scenario, std::uint64_t seed, const std::string& out,
                  const std::string& truth_path) {
  const auto spec = bundled_scenario(scenario, seed);
  const auto cohort = generate(spec);
  write_dataset(out, cohort.records, feature_names(spec));
  std::cout << "wrote " << cohort.records.size() << " records to " << out << "\n";
  if (!truth_path.empty()) {
    std::ofstream t(truth_path);
    if (!t) throw std::runtime_error("cannot write file: " + truth_path);
    t << ground_truth_to_json(cohort.truth);
    std::cout << "wrote ground truth to " << truth_path << "\n";
  }
}

void run_fit(const PipelineConfig& config, const std::string& data, const std::string& schema_path,
             const std::string& out, unsigned threads) {
  const auto schema = resolve_schema(schema_path, data);
  const auto loaded = load_dataset(data, schema);
  const auto result =
      run_two_step(loaded.records, config, encoded_feature_names(schema), threads);
  write_results(out, result);
  std::size_t fitted = 0;
  for (const auto& leaf : result.leaf_results) fitted += static_cast<std::size_t>(leaf.fitted);
  std::cout << "fit complete: " << loaded.records.size() << " records, "
            << result.leaf_results.size() << " leaves selected, " << fitted << " fitted\n";
  std::cout << "results written to " << out << "\n";
}

void run_predict(const std::string& results_dir, const std::string& data,
                 const std::string& schema_path, const std::string& out) {
  const auto result = load_results(results_dir);
  const auto schema = resolve_schema(schema_path, data);
  const auto loaded = load_dataset(data, schema);
  std::ofstream csv(out);
  if (!csv) throw std::runtime_error("cannot write file: " + out);
  csv << "patient_id,leaf_id,rmst_diff,status\n";
  std::size_t ok = 0;
  for (const auto& rec : loaded.records) {
    try {
      const auto pred = predict_new_patient(result, rec.covariates);
      csv << rec.id << ',' << pred.leaf_id << ',' << detail::format_double(pred.rmst_diff)
          << ",ok\n";
      ++ok;
    } catch (const NoFittedModelError& e) {
      csv << rec.id << ',' << e.report().leaf_id << ",," << sanitize_cell(e.what()) << "\n";
    }
  }
  if (!csv) throw std::runtime_error("write failed: " + out);
  std::cout << "predicted " << ok << " of " << loaded.records.size() << " patients, output in "
            << out << "\n";
}

void run_baseline(const std::string& data, const std::string& schema_path,
                  const std::string& out) {
  const auto schema = resolve_schema(schema_path, data);
  const auto loaded = load_dataset(data, schema);
  const auto baseline = population_baseline(loaded.records);
  std::cout << "median_t0 = " << optional_number(baseline.median_t0) << "\n";
  std::cout << "median_t1 = " << optional_number(baseline.median_t1) << "\n";
  std::cout << "median_diff = " << optional_number(baseline.median_diff) << "\n";
  if (!out.empty()) {
    ordered_json j;
    auto opt = [](const std::optional<double>& v) {
      return v ? ordered_json(*v) : ordered_json(nullptr);
    };
    j["median_t0"] = opt(baseline.median_t0);
    j["median_t1"] = opt(baseline.median_t1);
    j["median_diff"] = opt(baseline.median_diff);
    std::ofstream f(out);
    if (!f) throw std::runtime_error("cannot write file: " + out);
    f << j.dump(2) << "\n";
  }
}

void run_report(const std::string& results_dir, bool plots) {
  std::ifstream summary(results_dir + "/summary.json");
  if (!summary) throw std::runtime_error("cannot open file: " + results_dir + "/summary.json");
  const auto j = ordered_json::parse(summary);
  auto num = [](const ordered_json& v) {
    return v.is_null() ? std::string("undefined") : detail::format_double(v.get<double>());
  };
  std::cout << "root ATE: " << num(j.at("root_ate")) << " days\n";
  std::cout << "median_t0: " << num(j.at("median_t0")) << "\n";
  std::cout << "median_t1: " << num(j.at("median_t1")) << "\n";
  std::cout << "median_diff: " << num(j.at("median_diff")) << "\n";
  std::cout << "horizon: " << num(j.at("horizon")) << " days\n";
  std::cout << "feature scope: " << j.at("feature_scope").get<std::string>() << "\n";
  const auto& leaves = j.at("leaves");
  std::size_t fitted = 0;
  for (const auto& l : leaves) fitted += static_cast<std::size_t>(l.at("fitted").get<bool>());
  std::cout << "leaves: " << leaves.size() << " selected, " << fitted << " fitted\n";
  for (const auto& l : leaves) {
    std::cout << "  leaf " << l.at("leaf_id").get<int>() << ": tau_hat = " << num(l.at("tau_hat"))
              << " days, treated " << l.at("n_treated").get<std::size_t>() << ", control "
              << l.at("n_control").get<std::size_t>();
    std::string path;
    for (const auto& cond : l.at("path")) {
      if (!path.empty()) path += " and ";
      path += cond.at("feature").get<std::string>() + " " +
              cond.at("relation").get<std::string>() + " " + num(cond.at("threshold"));
    }
    std::cout << ", path: " << (path.empty() ? "(root)" : path) << "\n";
    if (l.at("fitted").get<bool>()) {
      std::cout << "    fitted, " << l.at("n_patients").get<std::size_t>()
                << " held-out patients, mean rmst_diff = " << num(l.at("mean_rmst_diff"))
                << " days\n";
    } else {
      std::cout << "    skipped: " << l.at("skip_reason").get<std::string>() << "\n";
    }
  }
  if (plots) {
    const auto n = write_plots(results_dir);
    std::cout << "wrote " << n << " plots to " << results_dir << "/plots\n";
  }
}

}  // namespace

int cli_main(const std::vector<std::string>& args) {
  CLI::App app{"heterogeneous treatment effects on survival: causal tree + per-leaf survival forests"};
  app.require_subcommand(1);

  std::string scenario, data, schema_path, out, config_path, results_dir, truth_path;
  std::uint64_t seed = 0;
  double threshold = 0.0, horizon = 0.0;
  unsigned threads = 1;
  bool plots = false;

  auto* sim = app.add_subcommand("simulate", "generate a synthetic cohort CSV");
  sim->add_option("--scenario", scenario, "bundled scenario name")->required();
  sim->add_option("--seed", seed, "RNG seed");
  sim->add_option("--out", out, "output CSV path")->required();
  sim->add_option("--truth", truth_path, "also write the ground-truth JSON here");
  sim->callback([&] { run_simulate(scenario, seed, out, truth_path); });

  auto* fit = app.add_subcommand("fit", "fit the two-step model and write a results directory");
  fit->add_option("--data", data, "cohort CSV")->required();
  fit->add_option("--schema", schema_path, "dataset schema JSON");
  fit->add_option("--out", out, "results directory")->required();
  fit->add_option("--config", config_path, "pipeline config JSON");
  auto* fit_seed = fit->add_option("--seed", seed, "RNG seed (overrides config)");
  auto* fit_threshold =
      fit->add_option("--threshold", threshold, "leaf selection threshold in days");
  auto* fit_horizon = fit->add_option("--horizon", horizon, "RMST horizon in days");
  fit->add_option("--threads", threads, "worker threads");
  fit->callback([&] {
    PipelineConfig config;
    if (!config_path.empty()) config = load_pipeline_config(config_path);
    if (fit_seed->count() > 0) config.seed = seed;
    if (fit_threshold->count() > 0) config.ate_threshold = threshold;
    if (fit_horizon->count() > 0) config.horizon = horizon;
    run_fit(config, data, schema_path, out, threads);
  });

  auto* predict = app.add_subcommand("predict", "predict differential survival for new patients");
  predict->add_option("--results", results_dir, "results directory from fit")->required();
  predict->add_option("--data", data, "patient CSV")->required();
  predict->add_option("--schema", schema_path, "dataset schema JSON");
  predict->add_option("--out", out, "output CSV path")->required();
  predict->callback([&] { run_predict(results_dir, data, schema_path, out); });

  auto* baseline = app.add_subcommand("baseline", "arm-wise KM medians and their difference");
  baseline->add_option("--data", data, "cohort CSV")->required();
  baseline->add_option("--schema", schema_path, "dataset schema JSON");
  baseline->add_option("--out", out, "also write the medians as JSON here");
  baseline->callback([&] { run_baseline(data, schema_path, out); });

  auto* report = app.add_subcommand("report", "print a results summary");
  report->add_option("--results", results_dir, "results directory from fit")->required();
  report->add_flag("--plots", plots, "regenerate SVG plots from the curve CSVs");
  report->callback([&] { run_report(results_dir, plots); });

  std::vector<std::string> argv_store{"causalsurv"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  argv.reserve(argv_store.size());
  for (auto& s : argv_store) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace causalsurv
