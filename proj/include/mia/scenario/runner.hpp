#pragma once

#include <cstdint>
#include <vector>

#include "mia/infra/graph.hpp"
#include "mia/metrics/metrics.hpp"
#include "mia/mission/simulator.hpp"
#include "mia/scenario/scenario.hpp"
#include "mia/threat/timeline.hpp"

namespace mia::scenario {

/// A validated scenario with its graph and mission resolved once, shared
/// read-only by every replication.
struct PreparedScenario {
  Scenario scenario;
  infra::InfrastructureGraph graph;
  mission::ValidatedMission mission;
};

/// Throws ValidationError.
PreparedScenario prepare(const Scenario& scenario);

struct ReplicationOutcome {
  metrics::MissionMetrics metrics;
  mission::MissionResult mission;
  threat::AttackTimeline timeline;
};

/// One replication on a private copy of the graph. With an attacker present
/// and `with_attack` set, the attack-free run at the same seed supplies the
/// completion-delay baseline.
ReplicationOutcome run_replication(const PreparedScenario& prepared, std::uint64_t seed, bool with_attack = true);

/// `n` replications from `base_seed`, ordered by replication index.
std::vector<metrics::MissionMetrics> run_batch(const PreparedScenario& prepared, std::size_t n,
                                               std::uint64_t base_seed, bool with_attack = true,
                                               unsigned threads = 1);

}  // namespace mia::scenario
