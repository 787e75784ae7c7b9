#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace causalsurv {

// One patient: observed follow-up time in days, death indicator, arm, features.
struct SurvivalRecord {
  std::string id;
  double time = 0.0;
  int event = 0;      // 1 = event observed, 0 = right-censored
  int treatment = 0;  // arm label, 0 or 1
  std::vector<double> covariates;
};

// Right-continuous step function S(t). S(t) = 1 for t before the first grid
// time; S(t) = probs[k] for the largest times[k] <= t. An empty grid means
// S(t) = 1 everywhere.
struct SurvivalCurve {
  std::vector<double> times;
  std::vector<double> probs;

  double operator()(double t) const;
  bool empty() const { return times.empty(); }
};

// times strictly increasing and nonnegative, probs in [0,1] and nonincreasing.
bool is_valid_curve(const SurvivalCurve& curve);

// S1(t) - S0(t) on the union grid of both curves.
struct DifferenceCurve {
  std::vector<double> times;
  std::vector<double> deltas;
};

struct LogRankResult {
  double z = 0.0;
  double chi_sq = 0.0;
  double observed_a = 0.0;
  double expected_a = 0.0;
  double variance = 0.0;
  bool degenerate = false;  // zero total variance; statistic defined as 0
};

// Kaplan-Meier product-limit estimate. Grid = distinct times with at least one
// event. At tied times deaths are processed before censorings, so records
// censored at t stay at risk for events at t.
SurvivalCurve km_estimate(std::span<const SurvivalRecord> records);

// Smallest grid time with S <= 0.5, or nullopt if the curve never gets there.
std::optional<double> median_survival(const SurvivalCurve& curve);

// Two-sample log-rank over the pooled distinct event times, with the
// hypergeometric variance. group_a supplies the observed/expected fields.
LogRankResult logrank(std::span<const SurvivalRecord> group_a,
                      std::span<const SurvivalRecord> group_b);

DifferenceCurve curve_diff(const SurvivalCurve& c1, const SurvivalCurve& c0);

// Exact integral of the step function over [0, horizon].
double rmst(const SurvivalCurve& curve, double horizon);
double rmst_diff(const SurvivalCurve& c1, const SurvivalCurve& c0, double horizon);

// Harrell's C over comparable pairs: (i, j) is comparable iff the shorter
// observed time carries an event and the times differ. Score ties count 0.5.
double concordance_index(std::span<const double> risk_scores,
                         std::span<const SurvivalRecord> records);

}  // namespace causalsurv
