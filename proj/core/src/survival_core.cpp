#include "causalsurv/survival_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace causalsurv {

double SurvivalCurve::operator()(double t) const {
  // index of the largest grid time <= t; S = 1 before the grid starts
  auto it = std::upper_bound(times.begin(), times.end(), t);
  if (it == times.begin()) return 1.0;
  return probs[static_cast<std::size_t>(it - times.begin()) - 1];
}

bool is_valid_curve(const SurvivalCurve& curve) {
  if (curve.times.size() != curve.probs.size()) return false;
  for (std::size_t i = 0; i < curve.times.size(); ++i) {
    if (!(curve.times[i] >= 0.0)) return false;
    if (i > 0 && !(curve.times[i] > curve.times[i - 1])) return false;
    if (!(curve.probs[i] >= 0.0 && curve.probs[i] <= 1.0)) return false;
    if (i > 0 && curve.probs[i] > curve.probs[i - 1]) return false;
  }
  return true;
}

namespace {

// (time, event) pairs sorted by time ascending
std::vector<std::pair<double, int>> sorted_outcomes(std::span<const SurvivalRecord> records) {
  std::vector<std::pair<double, int>> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    if (!(r.time >= 0.0)) throw std::invalid_argument("negative time");
    out.emplace_back(r.time, r.event);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

SurvivalCurve km_estimate(std::span<const SurvivalRecord> records) {
  if (records.empty()) throw std::invalid_argument("empty cohort");
  auto outcomes = sorted_outcomes(records);

  SurvivalCurve curve;
  double surv = 1.0;
  std::size_t i = 0;
  const std::size_t n = outcomes.size();
  while (i < n) {
    const double t = outcomes[i].first;
    const double at_risk = static_cast<double>(n - i);
    std::size_t deaths = 0;
    std::size_t j = i;
    while (j < n && outcomes[j].first == t) {
      deaths += static_cast<std::size_t>(outcomes[j].second != 0);
      ++j;
    }
    if (deaths > 0) {
      surv *= 1.0 - static_cast<double>(deaths) / at_risk;
      curve.times.push_back(t);
      curve.probs.push_back(surv);
    }
    i = j;
  }
  return curve;
}

std::optional<double> median_survival(const SurvivalCurve& curve) {
  for (std::size_t i = 0; i < curve.times.size(); ++i) {
    if (curve.probs[i] <= 0.5) return curve.times[i];
  }
  return std::nullopt;
}

LogRankResult logrank(std::span<const SurvivalRecord> group_a,
                      std::span<const SurvivalRecord> group_b) {
  if (group_a.empty() || group_b.empty()) throw std::invalid_argument("empty group");
  auto a = sorted_outcomes(group_a);
  auto b = sorted_outcomes(group_b);

  LogRankResult res;
  double diff_sum = 0.0;
  std::size_t ia = 0, ib = 0;
  while (ia < a.size() || ib < b.size()) {
    double t;
    if (ia == a.size()) {
      t = b[ib].first;
    } else if (ib == b.size()) {
      t = a[ia].first;
    } else {
      t = std::min(a[ia].first, b[ib].first);
    }
    const double n_a = static_cast<double>(a.size() - ia);
    const double n_b = static_cast<double>(b.size() - ib);
    double d_a = 0.0, d_b = 0.0;
    while (ia < a.size() && a[ia].first == t) {
      d_a += static_cast<double>(a[ia].second != 0);
      ++ia;
    }
    while (ib < b.size() && b[ib].first == t) {
      d_b += static_cast<double>(b[ib].second != 0);
      ++ib;
    }
    const double d = d_a + d_b;
    if (d > 0.0) {
      const double n_total = n_a + n_b;
      res.observed_a += d_a;
      res.expected_a += d * n_a / n_total;
      // symmetric forms: swapping the groups negates diff_sum and reproduces
      // variance bit for bit, so z negates exactly
      diff_sum += (d_a * n_b - d_b * n_a) / n_total;
      if (n_total > 1.0) {
        res.variance +=
            d * (n_a * n_b) * (n_total - d) / (n_total * n_total * (n_total - 1.0));
      }
    }
  }
  if (res.variance > 0.0) {
    res.z = diff_sum / std::sqrt(res.variance);
    res.chi_sq = res.z * res.z;
  } else {
    res.degenerate = true;
  }
  return res;
}

DifferenceCurve curve_diff(const SurvivalCurve& c1, const SurvivalCurve& c0) {
  DifferenceCurve out;
  out.times.reserve(c1.times.size() + c0.times.size());
  std::merge(c1.times.begin(), c1.times.end(), c0.times.begin(), c0.times.end(),
             std::back_inserter(out.times));
  out.times.erase(std::unique(out.times.begin(), out.times.end()), out.times.end());
  out.deltas.reserve(out.times.size());
  for (double t : out.times) out.deltas.push_back(c1(t) - c0(t));
  return out;
}

double rmst(const SurvivalCurve& curve, double horizon) {
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
  double area = 0.0;
  double prev_t = 0.0;
  double surv = 1.0;
  for (std::size_t i = 0; i < curve.times.size() && curve.times[i] < horizon; ++i) {
    const double t = std::max(curve.times[i], 0.0);
    area += (t - prev_t) * surv;
    prev_t = t;
    surv = curve.probs[i];
  }
  area += (horizon - prev_t) * surv;
  return area;
}

double rmst_diff(const SurvivalCurve& c1, const SurvivalCurve& c0, double horizon) {
  return rmst(c1, horizon) - rmst(c0, horizon);
}

double concordance_index(std::span<const double> risk_scores,
                         std::span<const SurvivalRecord> records) {
  if (risk_scores.size() != records.size()) {
    throw std::invalid_argument("risk scores and records differ in length");
  }
  const std::size_t n = records.size();
  double comparable = 0.0;
  double concordant = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto& ri = records[i];
      const auto& rj = records[j];
      if (ri.time == rj.time) continue;
      const std::size_t s = ri.time < rj.time ? i : j;  // shorter observed time
      const std::size_t l = s == i ? j : i;
      if (records[s].event == 0) continue;
      comparable += 1.0;
      if (risk_scores[s] > risk_scores[l]) {
        concordant += 1.0;
      } else if (risk_scores[s] == risk_scores[l]) {
        concordant += 0.5;
      }
    }
  }
  if (comparable == 0.0) throw std::invalid_argument("C-index undefined");
  return concordant / comparable;
}

}  // namespace causalsurv
