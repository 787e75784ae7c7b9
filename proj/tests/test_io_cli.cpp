#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "causalsurv/cli.hpp"
#include "causalsurv/datagen.hpp"
#include "causalsurv/dataset_io.hpp"
#include "causalsurv/pipeline.hpp"
#include "causalsurv/results_io.hpp"
#include "causalsurv/rng.hpp"
#include "test_support.hpp"

using namespace causalsurv;
using testsupport::TempDir;

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct CoutCapture {
  std::ostringstream captured;
  std::streambuf* saved;
  CoutCapture() : saved(std::cout.rdbuf(captured.rdbuf())) {}
  ~CoutCapture() { std::cout.rdbuf(saved); }
  std::string text() const { return captured.str(); }
};

std::vector<std::string> keys_of(const ordered_json& j) {
  std::vector<std::string> keys;
  for (const auto& item : j.items()) keys.push_back(item.key());
  return keys;
}

// Small two-leaf pipeline whose leaves all fit; shared across the results
// layout tests.
PipelineResult small_result() {
  const auto cohort = planted_effect_cohort(400, 10.0, 1.0, 4, 3);
  PipelineConfig config;
  config.causal.max_depth = 1;
  config.forest.n_trees = 25;
  config.horizon = 90.0;
  config.seed = 13;
  return run_two_step(cohort, config, {}, 4);
}

}  // namespace

TEST_SUITE("io_cli") {

TEST_CASE("a plain csv loads with counts and exact values") {
  TempDir tmp("load");
  write_file(tmp.file("d.csv"),
             "id,time,event,treatment,age,bmi\n"
             "p1,12.5,1,0,61,24.5\n"
             "\n"
             "p2,3,0,1,48,31\n"
             "p3,40,1,1,75,19.25\n");
  const auto loaded = load_dataset(tmp.file("d.csv"), default_schema({"age", "bmi"}));
  CHECK(loaded.report.n_rows == 3);
  CHECK(loaded.report.n_events == 2);
  CHECK(loaded.report.n_arm0 == 1);
  CHECK(loaded.report.n_arm1 == 2);
  REQUIRE(loaded.records.size() == 3);
  CHECK(loaded.records[0].id == "p1");
  CHECK(loaded.records[0].time == 12.5);
  CHECK(loaded.records[0].event == 1);
  CHECK(loaded.records[0].treatment == 0);
  CHECK(loaded.records[0].covariates == std::vector<double>{61.0, 24.5});
  CHECK(loaded.records[2].covariates == std::vector<double>{75.0, 19.25});
}

TEST_CASE("column order in the file does not matter") {
  TempDir tmp("order");
  write_file(tmp.file("a.csv"),
             "id,time,event,treatment,age\n"
             "p1,10,1,0,55\r\n"
             "p2,20,0,1,66\n");
  write_file(tmp.file("b.csv"),
             "age,treatment,id,event,time\n"
             "55,0,p1,1,10\n"
             "66,1,p2,0,20\n");
  const auto schema = default_schema({"age"});
  const auto a = load_dataset(tmp.file("a.csv"), schema);
  const auto b = load_dataset(tmp.file("b.csv"), schema);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].id == b.records[i].id);
    CHECK(a.records[i].time == b.records[i].time);
    CHECK(a.records[i].event == b.records[i].event);
    CHECK(a.records[i].treatment == b.records[i].treatment);
    CHECK(a.records[i].covariates == b.records[i].covariates);
  }
}

TEST_CASE("load errors name the row and column") {
  TempDir tmp("errs");
  const auto schema = default_schema({"age"});
  CHECK_THROWS_WITH_AS(load_dataset(tmp.file("missing.csv"), schema),
                       ("cannot open file: " + tmp.file("missing.csv")).c_str(),
                       std::runtime_error);

  write_file(tmp.file("empty.csv"), "");
  CHECK_THROWS_WITH_AS(load_dataset(tmp.file("empty.csv"), schema),
                       ("empty file: " + tmp.file("empty.csv")).c_str(), std::runtime_error);

  write_file(tmp.file("nocol.csv"), "id,time,event,age\np1,1,1,50\n");
  CHECK_THROWS_WITH_AS(load_dataset(tmp.file("nocol.csv"), schema), "missing column: treatment",
                       std::runtime_error);

  write_file(tmp.file("short.csv"), "id,time,event,treatment,age\np1,1,1,0,50\np2,2,1,0\n");
  CHECK_THROWS_WITH_AS(load_dataset(tmp.file("short.csv"), schema),
                       "row 2: expected 5 fields, got 4", std::runtime_error);

  write_file(tmp.file("badnum.csv"), "id,time,event,treatment,age\np1,abc,1,0,50\n");
  CHECK_THROWS_WITH_AS(load_dataset(tmp.file("badnum.csv"), schema),
                       "row 1, column time: not a number: 'abc'", std::runtime_error);

  write_file(tmp.file("negtime.csv"), "id,time,event,treatment,age\np1,-4,1,0,50\n");
  CHECK_THROWS_WITH_AS(load_dataset(tmp.file("negtime.csv"), schema),
                       "row 1, column time: negative time", std::runtime_error);

  write_file(tmp.file("badevt.csv"), "id,time,event,treatment,age\np1,1,2,0,50\n");
  CHECK_THROWS_WITH_AS(load_dataset(tmp.file("badevt.csv"), schema),
                       "row 1, column event: must be 0 or 1, got '2'", std::runtime_error);

  write_file(tmp.file("badarm.csv"), "id,time,event,treatment,age\np1,1,1,yes,50\n");
  CHECK_THROWS_WITH_AS(load_dataset(tmp.file("badarm.csv"), schema),
                       "row 1, column treatment: must be 0 or 1, got 'yes'", std::runtime_error);
}

TEST_CASE("ordinal codes and one-hot expansion") {
  TempDir tmp("enc");
  DatasetSchema schema;
  schema.covariates = {{"age", {}, {}},
                       {"stage", {{"I", 1.0}, {"II", 2.0}, {"III", 3.0}}, {}},
                       {"site", {}, {"lung", "breast"}}};
  CHECK(encoded_feature_names(schema) ==
        std::vector<std::string>{"age", "stage", "site=lung", "site=breast"});

  write_file(tmp.file("d.csv"),
             "id,time,event,treatment,age,stage,site\n"
             "p1,5,1,0,60,II,lung\n"
             "p2,8,0,1,49,I,breast\n");
  const auto loaded = load_dataset(tmp.file("d.csv"), schema);
  CHECK(loaded.records[0].covariates == std::vector<double>{60.0, 2.0, 1.0, 0.0});
  CHECK(loaded.records[1].covariates == std::vector<double>{49.0, 1.0, 0.0, 1.0});

  write_file(tmp.file("badstage.csv"),
             "id,time,event,treatment,age,stage,site\np1,5,1,0,60,IV,lung\n");
  CHECK_THROWS_WITH_AS(load_dataset(tmp.file("badstage.csv"), schema),
                       "row 1, column stage: unknown category 'IV'", std::runtime_error);

  write_file(tmp.file("badsite.csv"),
             "id,time,event,treatment,age,stage,site\np1,5,1,0,60,I,liver\n");
  CHECK_THROWS_WITH_AS(load_dataset(tmp.file("badsite.csv"), schema),
                       "row 1, column site: unknown category 'liver'", std::runtime_error);
}

TEST_CASE("write then load is lossless for doubles") {
  TempDir tmp("round");
  auto rng = make_engine(99);
  std::normal_distribution<double> norm(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<SurvivalRecord> records;
  for (int i = 0; i < 60; ++i) {
    SurvivalRecord r;
    r.id = "p" + std::to_string(i);
    r.time = unif(rng) * 123.456;
    r.event = unif(rng) < 0.5 ? 1 : 0;
    r.treatment = unif(rng) < 0.5 ? 1 : 0;
    r.covariates = {norm(rng), norm(rng) * 1e-7, norm(rng) * 1e7};
    records.push_back(std::move(r));
  }
  const std::vector<std::string> names{"a", "b", "c"};
  write_dataset(tmp.file("d.csv"), records, names);
  const auto loaded = load_dataset(tmp.file("d.csv"), default_schema(names));
  REQUIRE(loaded.records.size() == records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(loaded.records[i].id == records[i].id);
    CHECK(loaded.records[i].time == records[i].time);
    CHECK(loaded.records[i].event == records[i].event);
    CHECK(loaded.records[i].treatment == records[i].treatment);
    CHECK(loaded.records[i].covariates == records[i].covariates);
  }

  auto ragged = records;
  ragged[5].covariates.pop_back();
  CHECK_THROWS_WITH_AS(write_dataset(tmp.file("bad.csv"), ragged, names),
                       "covariate length mismatch for record p5", std::invalid_argument);
}

TEST_CASE("schema json round trip and validation") {
  DatasetSchema schema;
  schema.id_column = "patient";
  schema.covariates = {{"age", {}, {}},
                       {"stage", {{"I", 1.0}, {"II", 2.0}}, {}},
                       {"site", {}, {"lung", "breast"}}};
  const auto text = schema_to_json(schema);
  const auto back = schema_from_json(text);
  CHECK(back.id_column == "patient");
  CHECK(back.time_column == "time");
  REQUIRE(back.covariates.size() == 3);
  CHECK(back.covariates[1].codes == schema.covariates[1].codes);
  CHECK(back.covariates[2].one_hot == schema.covariates[2].one_hot);

  TempDir tmp("schema");
  write_file(tmp.file("s.json"), text);
  CHECK(load_schema(tmp.file("s.json")).covariates.size() == 3);

  CHECK_THROWS_WITH_AS(schema_from_json(R"({"surprise": 1})"), "unknown schema key: surprise",
                       std::runtime_error);
  CHECK_THROWS_WITH_AS(schema_from_json(R"({"covariates": [{"codes": {"a": 1}}]})"),
                       "covariate without a name", std::runtime_error);
  CHECK_THROWS_WITH_AS(
      schema_from_json(
          R"({"covariates": [{"name": "x", "codes": {"a": 1}, "one_hot": ["a"]}]})"),
      "column x sets both codes and one_hot", std::runtime_error);
}

TEST_CASE("summary json carries the documented shape") {
  const auto result = small_result();
  const auto text = summary_json(result);
  const auto j = ordered_json::parse(text);
  CHECK(keys_of(j) ==
        std::vector<std::string>{"root_ate", "median_t0", "median_t1", "median_diff", "horizon",
                                 "feature_scope", "scope_features", "feature_names", "config",
                                 "leaves", "provenance"});
  CHECK(j.at("horizon").get<double>() == 90.0);
  CHECK(j.at("feature_scope").get<std::string>() == "tree_features");
  CHECK(j.at("scope_features") == ordered_json::array({0}));
  CHECK(j.at("feature_names").size() == 4);

  CHECK(keys_of(j.at("config")) ==
        std::vector<std::string>{"causal", "forest", "ate_threshold", "horizon", "feature_scope",
                                 "test_fraction", "seed"});
  CHECK(j.at("config").at("causal").at("max_depth").get<int>() == 1);
  CHECK(j.at("config").at("forest").at("n_trees").get<int>() == 25);
  CHECK(j.at("config").at("seed").get<int>() == 13);

  REQUIRE(j.at("leaves").size() == 2);
  for (const auto& l : j.at("leaves")) {
    CHECK(keys_of(l) ==
          std::vector<std::string>{"leaf_id", "tau_hat", "n_treated", "n_control", "path",
                                   "fitted", "skip_reason", "n_patients", "mean_rmst_diff"});
    CHECK(l.at("fitted").get<bool>());
    CHECK(l.at("skip_reason").is_null());
    CHECK(l.at("n_patients").get<std::size_t>() > 0);
    REQUIRE(l.at("path").size() == 1);
    CHECK(l.at("path")[0].at("feature").get<std::string>() == "x0");
  }
  CHECK(j.at("leaves")[0].at("path")[0].at("relation").get<std::string>() == "<");
  CHECK(j.at("leaves")[1].at("path")[0].at("relation").get<std::string>() == ">=");

  const auto& prov = j.at("provenance");
  CHECK(keys_of(prov) ==
        std::vector<std::string>{"seed", "config_hash", "dataset_fingerprint", "n_records"});
  CHECK(prov.at("config_hash").get<std::string>().size() == 16);
  CHECK(prov.at("dataset_fingerprint").get<std::string>().size() == 16);
  CHECK(prov.at("n_records").get<std::size_t>() == 400);
  CHECK(text.back() == '\n');
}

TEST_CASE("a results directory reloads enough to keep predicting") {
  const auto result = small_result();
  TempDir tmp("results");
  const auto dir = tmp.file("out");
  write_results(dir, result);

  CHECK(read_file(dir + "/summary.json") == summary_json(result));
  CHECK(fs::exists(dir + "/tree.dot"));
  CHECK(read_file(dir + "/tree.json") == tree_to_json(result.tree));
  for (const auto& leaf : result.leaf_results) {
    const auto leaf_dir = dir + "/leaves/" + std::to_string(leaf.report.leaf_id);
    CHECK(fs::exists(leaf_dir + "/curves_t0.csv"));
    CHECK(fs::exists(leaf_dir + "/curves_t1.csv"));
    CHECK(fs::exists(leaf_dir + "/diff.csv"));
    CHECK(fs::exists(leaf_dir + "/forest_t0.json"));
    CHECK(fs::exists(leaf_dir + "/forest_t1.json"));
  }

  const auto loaded = load_results(dir);
  CHECK(tree_to_json(loaded.tree) == tree_to_json(result.tree));
  CHECK(loaded.horizon == result.horizon);
  CHECK(loaded.scope_features == result.scope_features);
  CHECK(loaded.feature_names == result.feature_names);
  CHECK(config_hash(loaded.config) == config_hash(result.config));
  CHECK(loaded.provenance.dataset_fingerprint == result.provenance.dataset_fingerprint);
  REQUIRE(loaded.leaf_results.size() == result.leaf_results.size());
  for (std::size_t k = 0; k < loaded.leaf_results.size(); ++k) {
    CHECK(loaded.leaf_results[k].report.leaf_id == result.leaf_results[k].report.leaf_id);
    CHECK(loaded.leaf_results[k].report.tau_hat == result.leaf_results[k].report.tau_hat);
    CHECK(loaded.leaf_results[k].fitted == result.leaf_results[k].fitted);
    CHECK(loaded.leaf_results[k].mean_rmst_diff == result.leaf_results[k].mean_rmst_diff);
  }

  for (double x0 : {0.0, 1.0}) {
    const std::vector<double> probe{x0, 0.3, -0.2, 1.1};
    const auto a = predict_new_patient(result, probe);
    const auto b = predict_new_patient(loaded, probe);
    CHECK(a.leaf_id == b.leaf_id);
    CHECK(a.curve_t0.probs == b.curve_t0.probs);
    CHECK(a.curve_t1.probs == b.curve_t1.probs);
    CHECK(a.rmst_diff == b.rmst_diff);
  }
}

TEST_CASE("curve csvs re-validate as survival curves") {
  const auto result = small_result();
  TempDir tmp("curves");
  const auto dir = tmp.file("out");
  write_results(dir, result);

  for (const auto& leaf : result.leaf_results) {
    const auto leaf_dir = dir + "/leaves/" + std::to_string(leaf.report.leaf_id);
    for (const char* name : {"/curves_t0.csv", "/curves_t1.csv"}) {
      std::istringstream in(read_file(leaf_dir + name));
      std::string line;
      REQUIRE(std::getline(in, line));
      CHECK(line == "leaf_id,patient_id,arm,time,survival");
      std::map<std::string, SurvivalCurve> grouped;
      while (std::getline(in, line)) {
        const auto fields = testsupport::split_line(line);
        REQUIRE(fields.size() == 5);
        CHECK(fields[0] == std::to_string(leaf.report.leaf_id));
        grouped[fields[1]].times.push_back(std::stod(fields[3]));
        grouped[fields[1]].probs.push_back(std::stod(fields[4]));
      }
      REQUIRE(grouped.count("cohort") == 1);
      CHECK(grouped.size() == leaf.patient_results.size() + 1);
      for (const auto& [id, curve] : grouped) CHECK(is_valid_curve(curve));
    }

    std::istringstream in(read_file(leaf_dir + "/diff.csv"));
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "leaf_id,patient_id,arm,time,survival,delta");
    std::size_t rows = 0;
    while (std::getline(in, line)) {
      const auto fields = testsupport::split_line(line);
      REQUIRE(fields.size() == 6);
      const double delta = std::stod(fields[5]);
      CHECK(delta >= -1.0);
      CHECK(delta <= 1.0);
      ++rows;
    }
    CHECK(rows > 0);
  }
}

TEST_CASE("plots regenerate from the csvs alone") {
  const auto result = small_result();
  TempDir tmp("plots");
  const auto dir = tmp.file("out");
  write_results(dir, result);
  const auto written = write_plots(dir);
  CHECK(written == 6);  // three per fitted leaf
  for (const auto& leaf : result.leaf_results) {
    const auto tag = "leaf" + std::to_string(leaf.report.leaf_id);
    for (const char* suffix : {"_km_overlay.svg", "_patient_overlay.svg", "_patient_diff.svg"}) {
      const auto path = dir + "/plots/" + tag + suffix;
      REQUIRE(fs::exists(path));
      CHECK(read_file(path).rfind("<svg", 0) == 0);
    }
  }
  CHECK_THROWS_WITH_AS(write_plots(tmp.file("nowhere")),
                       ("no leaves directory in " + tmp.file("nowhere")).c_str(),
                       std::runtime_error);
}

TEST_CASE("pipeline config json round trips and rejects unknown keys") {
  PipelineConfig config;
  config.causal.max_depth = 2;
  config.forest.mtry = 5;
  config.ate_threshold = 4.5;
  config.feature_scope = FeatureScope::all_features;
  config.seed = 21;
  const auto text = pipeline_config_to_json(config);
  const auto back = pipeline_config_from_json(text);
  CHECK(config_hash(back) == config_hash(config));

  TempDir tmp("cfg");
  write_file(tmp.file("c.json"), text);
  CHECK(config_hash(load_pipeline_config(tmp.file("c.json"))) == config_hash(config));

  CHECK_THROWS_WITH_AS(pipeline_config_from_json(R"({"causal": {"nope": 1}})"),
                       "unknown config key: causal.nope", std::runtime_error);
  CHECK_THROWS_WITH_AS(pipeline_config_from_json(R"({"forest": {"nope": 1}})"),
                       "unknown config key: forest.nope", std::runtime_error);
  CHECK_THROWS_WITH_AS(pipeline_config_from_json(R"({"wat": 1})"), "unknown config key: wat",
                       std::runtime_error);
  CHECK_THROWS_WITH_AS(pipeline_config_from_json(R"({"feature_scope": "everything"})"),
                       "unknown feature_scope: everything", std::runtime_error);
}

TEST_CASE("ground truth json lists the analytic medians") {
  const auto truth = generate(bundled_scenario("two_group", 3)).truth;
  const auto j = ordered_json::parse(ground_truth_to_json(truth));
  REQUIRE(j.at("subgroups").size() == 2);
  CHECK(j.at("subgroups")[0].at("name").get<std::string>() == "low_risk");
  CHECK(j.at("subgroups")[1].at("name").get<std::string>() == "high_risk");
  CHECK(j.at("subgroups")[0].at("hazard_t0").get<double>() == 0.01);
  CHECK(j.at("subgroups")[0].at("median_t0").get<double>() ==
        doctest::Approx(std::log(2.0) / 0.01).epsilon(1e-12));
}

TEST_CASE("cli end to end: simulate, fit, report, predict, baseline") {
  TempDir tmp("cli");
  const auto data = tmp.file("data.csv");
  const auto truth = tmp.file("truth.json");
  const auto results = tmp.file("results");

  {
    CoutCapture cap;
    REQUIRE(cli_main({"simulate", "--scenario", "two_group", "--seed", "5", "--out", data,
                      "--truth", truth}) == 0);
    CHECK(cap.text().find("wrote 1000 records to") != std::string::npos);
    CHECK(cap.text().find("wrote ground truth to") != std::string::npos);
  }
  REQUIRE(fs::exists(data));
  CHECK(ordered_json::parse(read_file(truth)).at("subgroups").size() == 2);

  write_file(tmp.file("config.json"),
             R"({"causal": {"max_depth": 2}, "forest": {"n_trees": 25}, "seed": 4})");
  {
    CoutCapture cap;
    REQUIRE(cli_main({"fit", "--data", data, "--out", results, "--config",
                      tmp.file("config.json"), "--threads", "4"}) == 0);
    CHECK(cap.text().find("fit complete: 1000 records") != std::string::npos);
    CHECK(cap.text().find("results written to " + results) != std::string::npos);
  }
  REQUIRE(fs::exists(results + "/summary.json"));

  {
    CoutCapture cap;
    REQUIRE(cli_main({"report", "--results", results}) == 0);
    const auto text = cap.text();
    CHECK(text.find("root ATE:") != std::string::npos);
    CHECK(text.find("leaves:") != std::string::npos);
    CHECK(text.find("horizon:") != std::string::npos);
  }
  {
    CoutCapture cap;
    REQUIRE(cli_main({"report", "--results", results, "--plots"}) == 0);
    CHECK(cap.text().find("plots to " + results + "/plots") != std::string::npos);
    CHECK(fs::is_directory(results + "/plots"));
  }

  const auto pred = tmp.file("pred.csv");
  {
    CoutCapture cap;
    REQUIRE(cli_main({"predict", "--results", results, "--data", data, "--out", pred}) == 0);
    CHECK(cap.text().find("patients, output in " + pred) != std::string::npos);
  }
  {
    std::istringstream in(read_file(pred));
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "patient_id,leaf_id,rmst_diff,status");
    std::size_t rows = 0, ok = 0;
    while (std::getline(in, line)) {
      const auto fields = testsupport::split_line(line);
      REQUIRE(fields.size() == 4);
      if (fields[3] == "ok") {
        ++ok;
        CHECK_FALSE(fields[2].empty());
      } else {
        CHECK(fields[2].empty());
      }
      ++rows;
    }
    CHECK(rows == 1000);
    CHECK(ok > 0);
  }

  const auto base = tmp.file("baseline.json");
  {
    CoutCapture cap;
    REQUIRE(cli_main({"baseline", "--data", data, "--out", base}) == 0);
    CHECK(cap.text().find("median_t0 = ") != std::string::npos);
    CHECK(cap.text().find("median_diff = ") != std::string::npos);
  }
  const auto bj = ordered_json::parse(read_file(base));
  CHECK(keys_of(bj) == std::vector<std::string>{"median_t0", "median_t1", "median_diff"});
}

TEST_CASE("cli fit is reproducible across runs and thread counts") {
  TempDir tmp("repro");
  const auto data = tmp.file("data.csv");
  REQUIRE(cli_main({"simulate", "--scenario", "graded_risk", "--seed", "8", "--out", data}) == 0);
  write_file(tmp.file("config.json"), R"({"forest": {"n_trees": 20}, "seed": 6})");
  for (int run = 0; run < 3; ++run) {
    const auto out = tmp.file("res" + std::to_string(run));
    REQUIRE(cli_main({"fit", "--data", data, "--out", out, "--config", tmp.file("config.json"),
                      "--threads", run == 2 ? "8" : "1"}) == 0);
  }
  const auto a = read_file(tmp.file("res0") + "/summary.json");
  CHECK(a == read_file(tmp.file("res1") + "/summary.json"));
  CHECK(a == read_file(tmp.file("res2") + "/summary.json"));
}

TEST_CASE("cli failures exit nonzero") {
  TempDir tmp("clifail");
  CHECK(cli_main({"explode"}) != 0);
  CHECK(cli_main({"simulate", "--scenario", "nope", "--out", tmp.file("x.csv")}) != 0);
  CHECK(cli_main({"fit", "--data", tmp.file("absent.csv"), "--out", tmp.file("r")}) != 0);
  CHECK(cli_main({"report", "--results", tmp.file("nores")}) != 0);
  CHECK(cli_main({"simulate", "--out", tmp.file("x.csv")}) != 0);  // --scenario required
}

}  // TEST_SUITE
