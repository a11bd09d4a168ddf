#include "mia/metrics/metrics.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <numeric>

#include "mia/error.hpp"

namespace mia::metrics {

const std::vector<std::string>& metric_names() {
  static const std::vector<std::string> names{
      "plans_completed", "plans_corrupted_undetected", "corrupted_fraction", "mean_completion_delay_s",
      "blocked_s",       "attack_duration_s",          "confidentiality_exposure_s"};
  return names;
}

std::vector<double> metric_values(const MissionMetrics& m) {
  return {static_cast<double>(m.plans_completed),
          static_cast<double>(m.plans_corrupted_undetected),
          m.corrupted_fraction,
          m.mean_completion_delay,
          m.blocked_seconds,
          m.attack_duration,
          m.confidentiality_exposure};
}

double mean_cycle_time(const mission::MissionResult& result) {
  double total = 0.0;
  std::size_t n = 0;
  for (const auto& item : result.items) {
    if (!item.completed()) continue;
    total += *item.completed_at - item.created_at;
    ++n;
  }
  return n == 0 ? 0.0 : total / static_cast<double>(n);
}

MissionMetrics collect(const mission::MissionResult& result, const threat::AttackTimeline* timeline,
                       std::optional<double> baseline_cycle_time) {
  MissionMetrics m;
  for (const auto& item : result.items) {
    if (item.outcome == mission::Outcome::CompletedClean) ++m.plans_completed;
    if (item.outcome == mission::Outcome::CompletedCorrupted) ++m.plans_corrupted_undetected;
  }
  m.corrupted_fraction = static_cast<double>(m.plans_corrupted_undetected) /
                         static_cast<double>(std::max<std::uint64_t>(1, m.plans_completed + m.plans_corrupted_undetected));
  if (baseline_cycle_time) m.mean_completion_delay = mean_cycle_time(result) - *baseline_cycle_time;
  for (const auto& [task, t] : result.blocked_time) m.blocked_seconds += t;
  if (timeline && timeline->first(threat::EventKind::EffectOnset)) {
    m.attack_duration = threat::attack_duration(*timeline, result.horizon).seconds;
    m.confidentiality_exposure = threat::confidentiality_exposure(*timeline, result.horizon);
  }
  return m;
}

Statistic summarize(const std::vector<double>& values, double confidence) {
  if (values.empty()) throw Error(Errc::EmptyInput, "no values to summarize");
  Statistic s;
  s.n = values.size();
  const double n = static_cast<double>(s.n);
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  s.min = *lo;
  s.max = *hi;
  if (s.n < 2) return s;
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.stdev = std::sqrt(ss / (n - 1.0));
  const boost::math::students_t dist(n - 1.0);
  const double t = boost::math::quantile(dist, 0.5 + confidence / 2.0);
  s.ci_half_width = t * s.stdev / std::sqrt(n);
  return s;
}

const Statistic& ReplicationSummary::at(const std::string& name) const {
  for (const auto& [k, v] : metrics) {
    if (k == name) return v;
  }
  throw Error(Errc::ValidationError, "unknown metric '" + name + "'");
}

ReplicationSummary aggregate(const std::vector<MissionMetrics>& runs) {
  if (runs.empty()) throw Error(Errc::EmptyInput, "no replications to aggregate");
  const auto& names = metric_names();
  std::vector<std::vector<double>> columns(names.size());
  for (const auto& r : runs) {
    const auto values = metric_values(r);
    for (std::size_t i = 0; i < values.size(); ++i) columns[i].push_back(values[i]);
  }
  ReplicationSummary out;
  for (std::size_t i = 0; i < names.size(); ++i) out.metrics.emplace_back(names[i], summarize(columns[i]));
  return out;
}

ComparisonReport compare(const ReplicationSummary& attack, const ReplicationSummary& baseline, double threshold) {
  const double base = baseline.at("plans_completed").mean;
  if (base <= 0.0) throw Error(Errc::BaselineZero, "baseline completed no plans");
  ComparisonReport r;
  r.threshold = threshold;
  for (const auto& [name, stat] : attack.metrics) r.deltas.emplace_back(name, stat.mean - baseline.at(name).mean);
  r.reduction = (base - attack.at("plans_completed").mean) / base;
  r.significant = r.reduction >= threshold;
  return r;
}

}  // namespace mia::metrics
