#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <set>
#include <string>

#include "mia/infra/graph.hpp"
#include "mia/sim/distribution.hpp"
#include "mia/sim/kernel.hpp"
#include "mia/sim/rng.hpp"
#include "mia/threat/attacker.hpp"
#include "mia/threat/timeline.hpp"

namespace mia::threat {

struct DefenderSpec {
  sim::Distribution detect_delay = sim::Fixed{3600.0};
  sim::Distribution forensics_duration = sim::Fixed{3600.0};
  double per_host_discovery_prob = 1.0;
  sim::Distribution remediation_per_host = sim::Fixed{3600.0};
};

/// Throws InvalidThreatSpec or InvalidDistribution.
void validate(const DefenderSpec& spec);

/// Detect, then forensics passes that each find every still-hidden foothold
/// host independently, with found hosts remediated one at a time while
/// forensics continues.
class Defender {
 public:
  using AwarenessHook = std::function<void(bool aware)>;

  Defender(DefenderSpec spec, infra::InfrastructureGraph& graph, sim::Kernel& kernel, std::uint64_t seed,
           AttackTimeline& timeline, Attacker& attacker, AwarenessHook awareness = {});
  Defender(const Defender&) = delete;
  Defender& operator=(const Defender&) = delete;

  std::size_t forensics_passes() const noexcept { return passes_; }
  bool detected() const noexcept { return detected_; }

 private:
  void on_onset();
  void detect();
  void forensics_pass();
  void remediate_next();
  void remediated(const std::string& host);

  DefenderSpec spec_;
  infra::InfrastructureGraph& graph_;
  sim::Kernel& kernel_;
  sim::RngStream rng_;
  AttackTimeline& timeline_;
  Attacker& attacker_;
  AwarenessHook awareness_;
  std::set<std::string> found_;
  std::deque<std::string> to_remediate_;
  bool remediating_ = false;
  bool detected_ = false;
  std::size_t passes_ = 0;
};

}  // namespace mia::threat
