#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "causalsurv/survival_core.hpp"

namespace causalsurv {

// How one moderator covariate is drawn. Moderators occupy the lowest
// covariate indices; the remaining p - moderators.size() features are
// standard normal noise.
struct ModeratorSpec {
  enum class Kind { bernoulli, uniform_int, uniform_real };
  std::string name;
  Kind kind = Kind::bernoulli;
  double a = 0.5;  // bernoulli: P(value 1); uniform_int / uniform_real: lower bound
  double b = 0.0;  // uniform_int: upper bound (inclusive); uniform_real: upper bound
};

// Membership: lo <= moderator value < hi. With a single subgroup the rule is
// ignored and every patient belongs to it.
struct SubgroupSpec {
  std::string name;
  std::size_t moderator = 0;  // index into ScenarioSpec::moderators
  double lo = 0.0;
  double hi = 0.0;
  double hazard_t0 = 0.0;  // events per day under arm 0
  double hazard_t1 = 0.0;  // events per day under arm 1
};

struct ScenarioSpec {
  std::string name;
  std::size_t n = 0;
  std::size_t p = 0;  // total covariate count, moderators included
  std::vector<ModeratorSpec> moderators;
  std::vector<SubgroupSpec> subgroups;
  double censoring_hazard = 0.0;  // independent exponential censoring, 0 = none
  double treat_prob = 0.5;
  std::optional<double> admin_cutoff;
  std::uint64_t seed = 0;
};

struct SubgroupTruth {
  std::string name;
  double hazard_t0 = 0.0;
  double hazard_t1 = 0.0;
  double median_t0 = 0.0;  // ln 2 / hazard_t0
  double median_t1 = 0.0;
};

struct GroundTruth {
  std::vector<SubgroupTruth> subgroups;
};

struct GeneratedCohort {
  std::vector<SurvivalRecord> records;
  GroundTruth truth;
};

// Event times are exponential with the subgroup-arm hazard; censoring is the
// minimum of an independent exponential draw and the admin cutoff. Observed
// time = min(event, censor), event flag = event time <= censor time.
// Deterministic under spec.seed.
GeneratedCohort generate(const ScenarioSpec& spec);

// True survival function of an exponential arm.
inline double true_survival(double hazard, double t) { return std::exp(-hazard * t); }

// (1 - e^{-h1 h})/h1 - (1 - e^{-h0 h})/h0 for the named subgroup.
double true_differential_rmst(const ScenarioSpec& spec, const std::string& subgroup,
                              double horizon);

// Which subgroup a covariate vector falls in, by the moderator rules.
std::size_t subgroup_index(const ScenarioSpec& spec, std::span<const double> covariates);

// Moderator names first, then "x<i>" for the noise features.
std::vector<std::string> feature_names(const ScenarioSpec& spec);

// Bundled scenarios: paper_shape, planted, null_effect, two_group, noise,
// graded_risk. Throws on an unknown name.
ScenarioSpec bundled_scenario(const std::string& name, std::uint64_t seed);
std::vector<std::string> bundled_scenario_names();

// Uncensored Gaussian-outcome cohorts for partitioning tests. Covariate 0 is
// a balanced binary moderator; outcome = 50 + tau*(2*x0 - 1)*treatment + noise.
std::vector<SurvivalRecord> planted_effect_cohort(std::size_t n, double tau, double noise_sd,
                                                  std::size_t p, std::uint64_t seed);

// All covariates pure noise; outcome = 50 + tau*treatment + noise.
std::vector<SurvivalRecord> constant_effect_cohort(std::size_t n, double tau, double noise_sd,
                                                   std::size_t p, std::uint64_t seed);

}  // namespace causalsurv
