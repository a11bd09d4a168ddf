#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mia/mission/simulator.hpp"
#include "mia/threat/timeline.hpp"

namespace mia::metrics {

struct MissionMetrics {
  std::uint64_t plans_completed = 0;
  std::uint64_t plans_corrupted_undetected = 0;
  double corrupted_fraction = 0.0;
  /// Mean cycle time minus the attack-free baseline's mean cycle time.
  double mean_completion_delay = 0.0;
  double blocked_seconds = 0.0;
  double attack_duration = 0.0;
  double confidentiality_exposure = 0.0;

  bool operator==(const MissionMetrics&) const = default;
};

/// Metric names in CSV column order.
const std::vector<std::string>& metric_names();
/// Values in metric_names() order.
std::vector<double> metric_values(const MissionMetrics& m);

/// Mean of completed_at - created_at over completed items; 0 when none completed.
double mean_cycle_time(const mission::MissionResult& result);

/// `baseline_cycle_time` is the attack-free run's mean cycle time at the same
/// seed; without it the delay is reported as 0.
MissionMetrics collect(const mission::MissionResult& result, const threat::AttackTimeline* timeline,
                       std::optional<double> baseline_cycle_time = std::nullopt);

struct Statistic {
  double mean = 0.0;
  double stdev = 0.0;
  /// Absent for n = 1.
  std::optional<double> ci_half_width;
  double min = 0.0;
  double max = 0.0;
  std::size_t n = 0;
};

/// Sample statistics with a Student-t 95% interval. Throws EmptyInput.
Statistic summarize(const std::vector<double>& values, double confidence = 0.95);

struct ReplicationSummary {
  std::vector<std::pair<std::string, Statistic>> metrics;  // metric_names() order

  /// Throws ValidationError for an unknown metric.
  const Statistic& at(const std::string& name) const;
};

/// Throws EmptyInput.
ReplicationSummary aggregate(const std::vector<MissionMetrics>& runs);

struct ComparisonReport {
  /// Attack mean minus baseline mean, per metric.
  std::vector<std::pair<std::string, double>> deltas;
  /// (baseline - attack) / baseline on plans_completed, as a fraction.
  double reduction = 0.0;
  double threshold = 0.10;
  bool significant = false;
};

/// Throws BaselineZero when the baseline completed no plans.
ComparisonReport compare(const ReplicationSummary& attack, const ReplicationSummary& baseline,
                         double threshold = 0.10);

}  // namespace mia::metrics
