#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "mia/infra/graph.hpp"
#include "mia/mission/mission_spec.hpp"
#include "mia/sim/kernel.hpp"
#include "mia/sim/rng.hpp"

namespace mia::mission {

struct MissionResult {
  std::vector<WorkItem> items;
  /// Busy person-seconds over available person-seconds, per role.
  std::map<std::string, double> task_utilization;
  /// Seconds during which a task's required assets had zero performance.
  std::map<std::string, double> blocked_time;
  /// Seconds during which a task ran at reduced, non-zero performance.
  std::map<std::string, double> degraded_time;
  double horizon = 0.0;
};

/// Drives work items through the mission workflow inside one replication.
///
/// Items arrive per the arrival distribution and visit tasks in the validated
/// order. Each role is a counted pool of people serving one FIFO queue. A task
/// runs only while every required asset has positive effective performance,
/// and at the rate of the weakest one; an outage suspends the item and returns
/// the person, and the item later resumes with its remaining work. Items
/// processed while a required asset is integrity-compromised become tainted.
/// Durations are drawn per task in start order from dedicated streams, so an
/// attack elsewhere in the model never reshuffles them.
class MissionSimulator {
 public:
  using TaskStartListener = std::function<void(const std::string& task, double at)>;

  MissionSimulator(const ValidatedMission& mission, infra::InfrastructureGraph& graph, sim::Kernel& kernel,
                   std::uint64_t seed);
  ~MissionSimulator();
  MissionSimulator(const MissionSimulator&) = delete;
  MissionSimulator& operator=(const MissionSimulator&) = delete;

  /// Schedules arrivals and checkpoints, and subscribes to graph changes.
  void start();

  /// Called by the defender. Turning awareness on runs an immediate
  /// examination sweep; while aware, tainted items are reworked as each task
  /// finishes with them. Turning it off runs one closing sweep.
  void set_awareness(bool aware);
  bool aware() const noexcept;

  void on_task_start(TaskStartListener listener);

  const std::vector<WorkItem>& items() const noexcept;

  /// Closes accounting at the kernel's current time.
  MissionResult finish();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Convenience: start, run the kernel to the mission horizon, finish.
MissionResult simulate_mission(const ValidatedMission& mission, infra::InfrastructureGraph& graph,
                               sim::Kernel& kernel, std::uint64_t seed);

}  // namespace mia::mission
