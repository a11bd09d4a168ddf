#include "mia/scenario/runner.hpp"

#include <memory>

#include "mia/sim/kernel.hpp"
#include "mia/sim/replications.hpp"
#include "mia/threat/attacker.hpp"
#include "mia/threat/defender.hpp"

namespace mia::scenario {

PreparedScenario prepare(const Scenario& scenario) {
  validate(scenario);
  PreparedScenario p{scenario, infra::build_graph(scenario.infrastructure), {}};
  p.scenario.mission.horizon = scenario.sim.horizon;
  p.mission = mission::validate_mission(p.scenario.mission, &p.graph);
  return p;
}

namespace {

ReplicationOutcome simulate(const PreparedScenario& p, std::uint64_t seed, bool with_attack) {
  infra::InfrastructureGraph graph = p.graph;
  sim::Kernel kernel;
  kernel.set_tracing(false);
  ReplicationOutcome out;
  mission::MissionSimulator mission(p.mission, graph, kernel, seed);

  std::unique_ptr<threat::Attacker> attacker;
  std::unique_ptr<threat::Defender> defender;
  const auto& s = p.scenario;
  if (with_attack && s.attacker) {
    attacker = std::make_unique<threat::Attacker>(*s.attacker, graph, kernel, seed, out.timeline, s.mission.day_length);
    if (s.defender) {
      defender = std::make_unique<threat::Defender>(*s.defender, graph, kernel, seed, out.timeline, *attacker,
                                                    [&mission](bool aware) { mission.set_awareness(aware); });
    }
    mission.on_task_start([&attacker](const std::string& task, double at) { attacker->notify_task_start(task, at); });
  }
  mission.start();
  if (attacker) attacker->start();
  kernel.run_until(s.sim.horizon);
  out.mission = mission.finish();
  return out;
}

}  // namespace

ReplicationOutcome run_replication(const PreparedScenario& p, std::uint64_t seed, bool with_attack) {
  ReplicationOutcome out = simulate(p, seed, with_attack);
  std::optional<double> baseline;
  if (with_attack && p.scenario.attacker) baseline = metrics::mean_cycle_time(simulate(p, seed, false).mission);
  out.metrics = metrics::collect(out.mission, &out.timeline, baseline);
  return out;
}

std::vector<metrics::MissionMetrics> run_batch(const PreparedScenario& p, std::size_t n, std::uint64_t base_seed,
                                               bool with_attack, unsigned threads) {
  return sim::run_replications(
      n, base_seed,
      [&](std::uint64_t seed, std::size_t) { return run_replication(p, seed, with_attack).metrics; }, threads);
}

}  // namespace mia::scenario
