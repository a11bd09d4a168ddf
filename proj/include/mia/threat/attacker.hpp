#pragma once

#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "mia/infra/graph.hpp"
#include "mia/sim/distribution.hpp"
#include "mia/sim/kernel.hpp"
#include "mia/sim/rng.hpp"
#include "mia/threat/timeline.hpp"

namespace mia::threat {

enum class EffectKind { Stop, Degrade, Integrity, Confidentiality };

struct Effect {
  EffectKind kind = EffectKind::Stop;
  /// Remaining performance for Degrade, strictly inside (0, 1).
  double factor = 0.5;
};

const char* to_string(EffectKind kind);

enum class StartKind { Fixed, Random, ProcessTriggered };

struct StartPolicy {
  StartKind kind = StartKind::Fixed;
  /// Fixed: start time.
  double at = 0.0;
  /// Random: start drawn uniformly from [window_begin, window_end).
  double window_begin = 0.0;
  double window_end = 0.0;
  /// ProcessTriggered: the first start of `task` at or after
  /// `day * day_length + after_time_of_day`.
  std::string task;
  double after_time_of_day = 0.0;
  int day = 0;
};

struct AttackerSpec {
  double spearphish_success_prob = 0.5;
  sim::Distribution spearphish_interval = sim::Fixed{3600.0};
  sim::Distribution scan_interval = sim::Fixed{3600.0};
  std::set<std::string> capabilities;
  std::string target;
  Effect effect;
  StartPolicy start;
  double proficiency = 1.0;
  double agility = 1.0;
};

/// Throws UnknownTarget, NoEndUserNodes, InvalidThreatSpec or InvalidDistribution.
void validate(const AttackerSpec& spec, const infra::InfrastructureGraph& graph);

enum class Phase { Dormant, Access, LateralMovement, Exploitation, EffectActive, Evicted };
const char* to_string(Phase phase);

struct AttackerState {
  Phase phase = Phase::Dormant;
  std::set<std::string> foothold;
  std::string current_position;
};

/// Kill-chain attacker for one replication. All draws come from one stream;
/// each step consumes the same number of draws whatever its outcome, so
/// varying proficiency or agility keeps the remaining draws aligned.
class Attacker {
 public:
  using OnsetListener = std::function<void(double at)>;

  Attacker(AttackerSpec spec, infra::InfrastructureGraph& graph, sim::Kernel& kernel, std::uint64_t seed,
           AttackTimeline& timeline, double day_length = 86400.0);
  Attacker(const Attacker&) = delete;
  Attacker& operator=(const Attacker&) = delete;

  /// Arms the start policy. A process-triggered attacker waits for
  /// notify_task_start.
  void start();
  void notify_task_start(const std::string& task, double at);

  void on_effect_onset(OnsetListener listener) { onset_listeners_.push_back(std::move(listener)); }

  /// Called by the defender once a host has been cleaned.
  void remove_host(const std::string& asset);

  const AttackerState& state() const noexcept { return state_; }
  const AttackerSpec& spec() const noexcept { return spec_; }

 private:
  void begin(double at);
  void spearphish();
  void scan();
  void occupy(const std::string& asset);
  void apply_effect();
  std::vector<std::size_t> eligible_hops() const;

  AttackerSpec spec_;
  infra::InfrastructureGraph& graph_;
  sim::Kernel& kernel_;
  sim::RngStream rng_;
  AttackTimeline& timeline_;
  double day_length_;
  std::vector<std::string> end_user_nodes_;
  AttackerState state_;
  bool armed_ = false;
  bool started_ = false;
  sim::EventId pending_ = 0;
  bool has_pending_ = false;
  std::vector<OnsetListener> onset_listeners_;
};

}  // namespace mia::threat
