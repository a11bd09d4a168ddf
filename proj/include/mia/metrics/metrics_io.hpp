#pragma once

#include <istream>
#include <nlohmann/json.hpp>
#include <ostream>
#include <vector>

#include "mia/metrics/metrics.hpp"

namespace mia::metrics {

inline constexpr const char* kCsvHeader =
    "replication,plans_completed,plans_corrupted_undetected,corrupted_fraction,mean_completion_delay_s,blocked_s,"
    "attack_duration_s,confidentiality_exposure_s";

void write_csv(std::ostream& out, const std::vector<MissionMetrics>& runs);
/// Throws ParseError with the offending line number.
std::vector<MissionMetrics> read_csv(std::istream& in);

nlohmann::json to_json(const Statistic& s);
nlohmann::json to_json(const ReplicationSummary& s);
nlohmann::json to_json(const ComparisonReport& r);

}  // namespace mia::metrics
