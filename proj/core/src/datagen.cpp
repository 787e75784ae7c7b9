#include "causalsurv/datagen.hpp"

#include <cstdio>
#include <limits>
#include <random>
#include <stdexcept>

#include "causalsurv/rng.hpp"

namespace causalsurv {

namespace {

void validate(const ScenarioSpec& spec) {
  if (spec.n == 0) throw std::invalid_argument("scenario needs n >= 1");
  if (spec.p < spec.moderators.size()) {
    throw std::invalid_argument("p smaller than the moderator count");
  }
  if (spec.subgroups.empty()) throw std::invalid_argument("scenario needs a subgroup");
  if (!(spec.treat_prob > 0.0 && spec.treat_prob < 1.0)) {
    throw std::invalid_argument("treat_prob must be in (0,1)");
  }
  if (spec.censoring_hazard < 0.0) {
    throw std::invalid_argument("censoring_hazard must be nonnegative");
  }
  if (spec.admin_cutoff && !(*spec.admin_cutoff > 0.0)) {
    throw std::invalid_argument("admin_cutoff must be positive");
  }
  for (const auto& g : spec.subgroups) {
    if (!(g.hazard_t0 > 0.0) || !(g.hazard_t1 > 0.0)) {
      throw std::invalid_argument("subgroup hazards must be positive");
    }
    if (spec.subgroups.size() > 1) {
      if (g.moderator >= spec.moderators.size()) {
        throw std::invalid_argument("subgroup references an unknown moderator");
      }
      if (!(g.lo < g.hi)) throw std::invalid_argument("subgroup interval is empty");
    }
  }
  for (const auto& m : spec.moderators) {
    if (m.kind == ModeratorSpec::Kind::bernoulli && !(m.a >= 0.0 && m.a <= 1.0)) {
      throw std::invalid_argument("bernoulli moderator probability outside [0,1]");
    }
    if (m.kind != ModeratorSpec::Kind::bernoulli && !(m.a <= m.b)) {
      throw std::invalid_argument("moderator bounds out of order");
    }
  }
}

std::string padded_id(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "p%06zu", i);
  return std::string(buf);
}

}  // namespace

GeneratedCohort generate(const ScenarioSpec& spec) {
  validate(spec);
  auto rng = make_engine(spec.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> norm(0.0, 1.0);

  GeneratedCohort out;
  out.records.reserve(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    SurvivalRecord r;
    r.id = padded_id(i);
    r.covariates.resize(spec.p);
    for (std::size_t m = 0; m < spec.moderators.size(); ++m) {
      const auto& mod = spec.moderators[m];
      switch (mod.kind) {
        case ModeratorSpec::Kind::bernoulli:
          r.covariates[m] = unif(rng) < mod.a ? 1.0 : 0.0;
          break;
        case ModeratorSpec::Kind::uniform_int: {
          std::uniform_int_distribution<long> draw(static_cast<long>(mod.a),
                                                   static_cast<long>(mod.b));
          r.covariates[m] = static_cast<double>(draw(rng));
          break;
        }
        case ModeratorSpec::Kind::uniform_real: {
          std::uniform_real_distribution<double> draw(mod.a, mod.b);
          r.covariates[m] = draw(rng);
          break;
        }
      }
    }
    for (std::size_t k = spec.moderators.size(); k < spec.p; ++k) r.covariates[k] = norm(rng);
    r.treatment = unif(rng) < spec.treat_prob ? 1 : 0;

    const auto& g = spec.subgroups[subgroup_index(spec, r.covariates)];
    std::exponential_distribution<double> event_draw(r.treatment == 1 ? g.hazard_t1
                                                                      : g.hazard_t0);
    const double t_event = event_draw(rng);
    double t_censor = std::numeric_limits<double>::infinity();
    if (spec.censoring_hazard > 0.0) {
      std::exponential_distribution<double> censor_draw(spec.censoring_hazard);
      t_censor = censor_draw(rng);
    }
    if (spec.admin_cutoff) t_censor = std::min(t_censor, *spec.admin_cutoff);
    r.event = t_event <= t_censor ? 1 : 0;
    r.time = std::min(t_event, t_censor);
    out.records.push_back(std::move(r));
  }

  const double ln2 = std::log(2.0);
  for (const auto& g : spec.subgroups) {
    out.truth.subgroups.push_back(
        {g.name, g.hazard_t0, g.hazard_t1, ln2 / g.hazard_t0, ln2 / g.hazard_t1});
  }
  return out;
}

double true_differential_rmst(const ScenarioSpec& spec, const std::string& subgroup,
                              double horizon) {
  for (const auto& g : spec.subgroups) {
    if (g.name == subgroup) {
      auto restricted_mean = [horizon](double lambda) {
        return (1.0 - std::exp(-lambda * horizon)) / lambda;
      };
      return restricted_mean(g.hazard_t1) - restricted_mean(g.hazard_t0);
    }
  }
  throw std::invalid_argument("unknown subgroup: " + subgroup);
}

std::size_t subgroup_index(const ScenarioSpec& spec, std::span<const double> covariates) {
  if (spec.subgroups.size() == 1) return 0;
  std::size_t found = spec.subgroups.size();
  for (std::size_t gi = 0; gi < spec.subgroups.size(); ++gi) {
    const auto& g = spec.subgroups[gi];
    if (g.moderator >= covariates.size()) {
      throw std::invalid_argument("covariate vector too short for subgroup rule");
    }
    const double v = covariates[g.moderator];
    if (v >= g.lo && v < g.hi) {
      if (found != spec.subgroups.size()) {
        throw std::runtime_error("subgroup rules do not partition: multiple matches");
      }
      found = gi;
    }
  }
  if (found == spec.subgroups.size()) {
    throw std::runtime_error("subgroup rules do not partition: no match");
  }
  return found;
}

std::vector<std::string> feature_names(const ScenarioSpec& spec) {
  std::vector<std::string> names;
  names.reserve(spec.p);
  for (const auto& m : spec.moderators) names.push_back(m.name);
  for (std::size_t k = spec.moderators.size(); k < spec.p; ++k) {
    names.push_back("x" + std::to_string(k));
  }
  return names;
}

ScenarioSpec bundled_scenario(const std::string& name, std::uint64_t seed) {
  const double ln2 = std::log(2.0);
  const double lo = std::numeric_limits<double>::lowest();
  const double hi = std::numeric_limits<double>::max();
  ScenarioSpec spec;
  spec.name = name;
  spec.seed = seed;
  if (name == "paper_shape") {
    // cohort shaped to the reported arm medians of 34 and 43 days
    spec.n = 1806;
    spec.p = 110;
    spec.treat_prob = 520.0 / 1806.0;
    spec.censoring_hazard = 0.002;
    spec.subgroups = {{"all", 0, lo, hi, ln2 / 34.0, ln2 / 43.0}};
  } else if (name == "planted") {
    // one responsive subgroup (hazard halved under arm 1), one null subgroup
    spec.n = 2000;
    spec.p = 20;
    spec.treat_prob = 0.5;
    spec.censoring_hazard = 0.002;
    spec.moderators = {{"x0", ModeratorSpec::Kind::bernoulli, 0.5, 0.0}};
    spec.subgroups = {{"unaffected", 0, lo, 0.5, 0.02, 0.02},
                      {"responsive", 0, 0.5, hi, 0.02, 0.01}};
  } else if (name == "null_effect") {
    spec.n = 2000;
    spec.p = 20;
    spec.treat_prob = 0.5;
    spec.censoring_hazard = 0.002;
    spec.subgroups = {{"all", 0, lo, hi, 0.02, 0.02}};
  } else if (name == "two_group") {
    // hazard ratio 4 between the groups, no arm effect
    spec.n = 1000;
    spec.p = 10;
    spec.treat_prob = 0.5;
    spec.moderators = {{"risk_group", ModeratorSpec::Kind::bernoulli, 0.5, 0.0}};
    spec.subgroups = {{"low_risk", 0, lo, 0.5, 0.01, 0.01},
                      {"high_risk", 0, 0.5, hi, 0.04, 0.04}};
  } else if (name == "noise") {
    spec.n = 1000;
    spec.p = 10;
    spec.treat_prob = 0.5;
    spec.subgroups = {{"all", 0, lo, hi, 0.02, 0.02}};
  } else if (name == "graded_risk") {
    // four risk levels, hazard scaling 25x end to end
    spec.n = 1000;
    spec.p = 10;
    spec.treat_prob = 0.5;
    spec.moderators = {{"risk_level", ModeratorSpec::Kind::uniform_int, 0.0, 3.0}};
    spec.subgroups.clear();
    for (int level = 0; level < 4; ++level) {
      const double hazard = 0.004 * std::pow(25.0, level / 3.0);
      spec.subgroups.push_back({"level" + std::to_string(level), 0, level - 0.5, level + 0.5,
                                hazard, hazard});
    }
  } else {
    throw std::invalid_argument("unknown scenario: " + name);
  }
  return spec;
}

std::vector<std::string> bundled_scenario_names() {
  return {"paper_shape", "planted", "null_effect", "two_group", "noise", "graded_risk"};
}

std::vector<SurvivalRecord> planted_effect_cohort(std::size_t n, double tau, double noise_sd,
                                                  std::size_t p, std::uint64_t seed) {
  if (p < 1) throw std::invalid_argument("needs at least one covariate");
  auto rng = make_engine(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> norm(0.0, 1.0);
  std::vector<SurvivalRecord> records;
  records.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    SurvivalRecord r;
    r.id = padded_id(i);
    r.covariates.resize(p);
    r.covariates[0] = unif(rng) < 0.5 ? 1.0 : 0.0;
    for (std::size_t k = 1; k < p; ++k) r.covariates[k] = norm(rng);
    r.treatment = unif(rng) < 0.5 ? 1 : 0;
    const double direction = 2.0 * r.covariates[0] - 1.0;
    r.time = 50.0 + tau * direction * r.treatment + noise_sd * norm(rng);
    r.event = 1;
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<SurvivalRecord> constant_effect_cohort(std::size_t n, double tau, double noise_sd,
                                                   std::size_t p, std::uint64_t seed) {
  auto rng = make_engine(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> norm(0.0, 1.0);
  std::vector<SurvivalRecord> records;
  records.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    SurvivalRecord r;
    r.id = padded_id(i);
    r.covariates.resize(p);
    for (std::size_t k = 0; k < p; ++k) r.covariates[k] = norm(rng);
    r.treatment = unif(rng) < 0.5 ? 1 : 0;
    r.time = 50.0 + tau * r.treatment + noise_sd * norm(rng);
    r.event = 1;
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace causalsurv
