// Acceptance gate: one criterion per invocation, selected by argv[1] (1..8).
// Prints a single [PASS]/[FAIL] line and exits 0/1 so each criterion is its
// own ctest entry.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "causalsurv/causal_tree.hpp"
#include "causalsurv/cli.hpp"
#include "causalsurv/datagen.hpp"
#include "causalsurv/pipeline.hpp"
#include "causalsurv/results_io.hpp"
#include "causalsurv/rng.hpp"
#include "causalsurv/survival_core.hpp"
#include "causalsurv/survival_forest.hpp"
#include "test_support.hpp"

using namespace causalsurv;

namespace {

namespace fs = std::filesystem;

struct Outcome {
  bool pass = false;
  std::string details;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(4);
  out << v;
  return out.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// cli_main prints progress lines; keep the acceptance output to one line
int quiet_cli(const std::vector<std::string>& args) {
  std::ostringstream sink;
  auto* old = std::cout.rdbuf(sink.rdbuf());
  const int rc = cli_main(args);
  std::cout.rdbuf(old);
  return rc;
}

// 1. KM against the brute-force product-limit oracle, 200 random cohorts.
Outcome criterion_1() {
  const auto start = std::chrono::steady_clock::now();
  auto rng = make_engine(42);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto cohort = testsupport::random_cohort(rng);
    const auto km = km_estimate(cohort);
    const auto oracle = testsupport::oracle_km(cohort);
    if (km.times != oracle.times) return {false, "grid mismatch on trial " + std::to_string(trial)};
    for (std::size_t k = 0; k < km.probs.size(); ++k) {
      worst = std::max(worst, std::abs(km.probs[k] - oracle.probs[k]));
    }
  }
  const double elapsed = seconds_since(start);
  if (worst > 1e-12) return {false, "max |dS| = " + fmt(worst)};
  if (elapsed >= 1.0) return {false, "took " + fmt(elapsed) + "s, budget 1s"};
  return {true, "200 cohorts, max |dS| = " + fmt(worst) + ", " + fmt(elapsed) + "s"};
}

// 2. Log-rank against the O/E/V table oracle plus exact swap symmetry.
Outcome criterion_2() {
  auto rng = make_engine(43);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = testsupport::random_cohort(rng);
    const auto b = testsupport::random_cohort(rng);
    const auto res = logrank(a, b);
    const auto table = testsupport::oracle_logrank(a, b);
    worst = std::max(worst, std::abs(res.observed_a - table.observed_a));
    worst = std::max(worst, std::abs(res.expected_a - table.expected_a));
    worst = std::max(worst, std::abs(res.variance - table.variance));
    if (!res.degenerate) {
      const double oracle_z =
          (table.observed_a - table.expected_a) / std::sqrt(table.variance);
      worst = std::max(worst, std::abs(res.z - oracle_z));
    }
    const auto swapped = logrank(b, a);
    if (swapped.degenerate != res.degenerate) {
      return {false, "degeneracy flag changed under swap on trial " + std::to_string(trial)};
    }
    if (swapped.z != -res.z || swapped.chi_sq != res.chi_sq) {
      return {false, "swap symmetry not exact on trial " + std::to_string(trial)};
    }
  }
  if (worst > 1e-10) return {false, "max oracle gap = " + fmt(worst)};
  return {true, "200 pairs, max oracle gap = " + fmt(worst) + ", swap exact"};
}

// 3. Planted moderator: root split recovered with leaf effects near the truth.
Outcome criterion_3() {
  const auto start = std::chrono::steady_clock::now();
  CausalTreeConfig config;
  int good = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto cohort = planted_effect_cohort(400, 10.0, 1.0, 10, seed);
    const auto tree = fit_causal_tree(cohort, config, seed);
    if (tree.nodes.empty() || tree.nodes[0].is_leaf() || tree.nodes[0].feature_index != 0) {
      continue;
    }
    bool leaves_ok = true;
    const auto reports = extract_leaf_reports(tree, {});
    for (const auto& report : reports) {
      if (report.path.empty() || report.path[0].feature != "x0") {
        leaves_ok = false;
        break;
      }
      const double want = report.path[0].geq ? 10.0 : -10.0;
      if (std::abs(report.tau_hat - want) > 1.5) {
        leaves_ok = false;
        break;
      }
    }
    if (leaves_ok) ++good;
  }
  const double elapsed = seconds_since(start);
  if (elapsed >= 10.0) return {false, "took " + fmt(elapsed) + "s, budget 10s"};
  if (good < 19) return {false, std::to_string(good) + "/20 seeds recovered"};
  return {true, std::to_string(good) + "/20 seeds, " + fmt(elapsed) + "s"};
}

// 4. Forest discrimination: two risk groups at hazard ratio 4 must reach
// oob_error <= 0.3 while pure noise stays at chance.
Outcome criterion_4() {
  const auto start = std::chrono::steady_clock::now();
  ForestConfig config;
  const auto grouped = generate(bundled_scenario("two_group", 404)).records;
  const double grouped_err = oob_error(fit_survival_forest(grouped, config, 7, 8), grouped);
  const auto noise = generate(bundled_scenario("noise", 405)).records;
  const double noise_err = oob_error(fit_survival_forest(noise, config, 9, 8), noise);
  const double elapsed = seconds_since(start);
  const std::string details = "two-group oob = " + fmt(grouped_err) + ", noise oob = " +
                              fmt(noise_err) + ", " + fmt(elapsed) + "s";
  if (elapsed >= 60.0) return {false, details + ", budget 60s"};
  if (noise_err < 0.45 || noise_err > 0.55) return {false, details};
  if (grouped_err > 0.3) return {false, details};
  return {true, details};
}

// 5. End-to-end recovery of the planted differential survival effect.
Outcome criterion_5() {
  const auto start = std::chrono::steady_clock::now();
  int good = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto spec = bundled_scenario("planted", seed);
    const auto cohort = generate(spec).records;
    PipelineConfig config;
    config.causal.max_depth = 1;
    config.horizon = 180.0;
    config.seed = 500 + seed;
    const auto result = run_two_step(cohort, config, feature_names(spec), 8);
    if (result.leaf_results.size() != 2) continue;
    const LeafResult* affected = nullptr;
    const LeafResult* null_leaf = nullptr;
    for (const auto& leaf : result.leaf_results) {
      if (!leaf.fitted || leaf.report.path.size() != 1 || leaf.report.path[0].feature != "x0") {
        break;
      }
      (leaf.report.path[0].geq ? affected : null_leaf) = &leaf;
    }
    if (affected == nullptr || null_leaf == nullptr) continue;
    const double truth = true_differential_rmst(spec, "responsive", result.horizon);
    const bool affected_ok =
        std::abs(affected->mean_rmst_diff - truth) <= 0.25 * std::abs(truth);
    const bool null_ok =
        std::abs(null_leaf->mean_rmst_diff) < 0.5 * std::abs(affected->mean_rmst_diff);
    if (affected_ok && null_ok) ++good;
  }
  const double elapsed = seconds_since(start);
  if (elapsed >= 300.0) return {false, "took " + fmt(elapsed) + "s, budget 300s"};
  if (good < 4) return {false, std::to_string(good) + "/5 seeds recovered"};
  return {true, std::to_string(good) + "/5 seeds, " + fmt(elapsed) + "s"};
}

fs::path scratch_dir(const std::string& tag) {
  const auto dir = fs::temp_directory_path() / ("causalsurv_accept_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// 6. The naive population baseline on a cohort shaped to 34- and 43-day arm
// medians reports a difference of 9 +/- 2 days, through the CLI.
Outcome criterion_6() {
  const auto dir = scratch_dir("baseline");
  const auto data = (dir / "data.csv").string();
  const auto out = (dir / "baseline.json").string();
  if (quiet_cli({"simulate", "--scenario", "paper_shape", "--seed", "16", "--out", data}) != 0) {
    return {false, "simulate failed"};
  }
  if (quiet_cli({"baseline", "--data", data, "--out", out}) != 0) {
    return {false, "baseline failed"};
  }
  const auto j = nlohmann::ordered_json::parse(read_file(out));
  if (j.at("median_diff").is_null()) return {false, "median_diff undefined"};
  const double diff = j.at("median_diff").get<double>();
  fs::remove_all(dir);
  if (std::abs(diff - 9.0) > 2.0) return {false, "median_diff = " + fmt(diff)};
  return {true, "median_diff = " + fmt(diff) + " days"};
}

// 7. Byte-identical summary.json across reruns and thread counts.
Outcome criterion_7() {
  const auto dir = scratch_dir("determinism");
  const auto data = (dir / "data.csv").string();
  if (quiet_cli({"simulate", "--scenario", "two_group", "--seed", "5", "--out", data}) != 0) {
    return {false, "simulate failed"};
  }
  {
    std::ofstream cfg(dir / "config.json");
    cfg << R"({"causal": {"max_depth": 3}, "forest": {"n_trees": 50}, "seed": 11})" << "\n";
  }
  const char* threads[3] = {"1", "1", "8"};
  std::vector<std::string> summaries;
  for (int run = 0; run < 3; ++run) {
    const auto out = (dir / ("res" + std::to_string(run))).string();
    if (quiet_cli({"fit", "--data", data, "--out", out, "--config", (dir / "config.json").string(),
                  "--threads", threads[run]}) != 0) {
      return {false, "fit failed on run " + std::to_string(run)};
    }
    summaries.push_back(read_file(out + "/summary.json"));
  }
  fs::remove_all(dir);
  if (summaries[0].empty()) return {false, "summary.json empty"};
  if (summaries[0] != summaries[1]) return {false, "rerun differs at 1 thread"};
  if (summaries[0] != summaries[2]) return {false, "8-thread run differs from 1-thread"};
  return {true, "3 runs byte-identical (threads 1,1,8)"};
}

// 8. The full unit suite (given as argv[2]) passes inside the time budget.
Outcome criterion_8(const std::string& unit_binary) {
  if (unit_binary.empty()) return {false, "unit test binary path not provided"};
  const auto start = std::chrono::steady_clock::now();
  const int rc = std::system(("\"" + unit_binary + "\" > /dev/null 2>&1").c_str());
  const double elapsed = seconds_since(start);
  if (rc != 0) return {false, "unit suite exited " + std::to_string(rc)};
  if (elapsed >= 600.0) return {false, "took " + fmt(elapsed) + "s, budget 600s"};
  return {true, "unit suite green in " + fmt(elapsed) + "s"};
}

const char* descriptions[8] = {
    "KM matches the brute-force product-limit oracle",
    "log-rank matches the O/E/V oracle with exact swap symmetry",
    "causal tree recovers the planted moderator across seeds",
    "forest OOB error separates risk groups and stays at chance on noise",
    "pipeline recovers the planted differential survival effect",
    "population baseline reproduces the nine-day median difference",
    "summary.json is byte-identical across reruns and thread counts",
    "full unit suite passes within its time budget",
};

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: " << argv[0] << " <criterion 1..8> [unit-test-binary]\n";
    return 2;
  }
  const int n = std::atoi(argv[1]);
  if (n < 1 || n > 8) {
    std::cerr << "criterion must be 1..8\n";
    return 2;
  }
  Outcome outcome;
  switch (n) {
    case 1: outcome = criterion_1(); break;
    case 2: outcome = criterion_2(); break;
    case 3: outcome = criterion_3(); break;
    case 4: outcome = criterion_4(); break;
    case 5: outcome = criterion_5(); break;
    case 6: outcome = criterion_6(); break;
    case 7: outcome = criterion_7(); break;
    case 8: outcome = criterion_8(argc > 2 ? argv[2] : ""); break;
  }
  std::cout << (outcome.pass ? "[PASS] " : "[FAIL] ") << n << ". " << descriptions[n - 1]
            << " (" << outcome.details << ")\n";
  return outcome.pass ? 0 : 1;
}
