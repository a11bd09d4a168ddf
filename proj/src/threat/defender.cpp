#include "mia/threat/defender.hpp"

#include "mia/error.hpp"

namespace mia::threat {

void validate(const DefenderSpec& spec) {
  if (!(spec.per_host_discovery_prob >= 0.0 && spec.per_host_discovery_prob <= 1.0)) {
    throw Error(Errc::InvalidThreatSpec, "per_host_discovery_prob outside [0, 1]");
  }
  sim::validate(spec.detect_delay);
  sim::validate(spec.forensics_duration);
  sim::validate(spec.remediation_per_host);
}

Defender::Defender(DefenderSpec spec, infra::InfrastructureGraph& graph, sim::Kernel& kernel, std::uint64_t seed,
                   AttackTimeline& timeline, Attacker& attacker, AwarenessHook awareness)
    : spec_(std::move(spec)),
      graph_(graph),
      kernel_(kernel),
      rng_(seed, sim::StreamId::Defender),
      timeline_(timeline),
      attacker_(attacker),
      awareness_(std::move(awareness)) {
  validate(spec_);
  attacker_.on_effect_onset([this](double) { on_onset(); });
}

void Defender::on_onset() {
  kernel_.schedule_in(std::max(0.0, sim::sample(spec_.detect_delay, rng_)), "detect", [this] { detect(); });
}

void Defender::detect() {
  detected_ = true;
  timeline_.record(kernel_.now(), EventKind::Detection);
  if (awareness_) awareness_(true);
  kernel_.schedule_in(std::max(0.0, sim::sample(spec_.forensics_duration, rng_)), "forensics",
                      [this] { forensics_pass(); });
}

void Defender::forensics_pass() {
  ++passes_;
  timeline_.record(kernel_.now(), EventKind::ForensicsComplete);
  bool hidden_left = false;
  // std::set iteration keeps the per-host draws in id order.
  for (const auto& host : attacker_.state().foothold) {
    if (found_.count(host)) continue;
    if (rng_.uniform() < spec_.per_host_discovery_prob) {
      found_.insert(host);
      to_remediate_.push_back(host);
      timeline_.record(kernel_.now(), EventKind::HostFound, host);
    } else {
      hidden_left = true;
    }
  }
  if (hidden_left) {
    kernel_.schedule_in(std::max(0.0, sim::sample(spec_.forensics_duration, rng_)), "forensics",
                        [this] { forensics_pass(); });
  }
  if (!remediating_) remediate_next();
}

void Defender::remediate_next() {
  if (to_remediate_.empty()) {
    remediating_ = false;
    return;
  }
  remediating_ = true;
  std::string host = to_remediate_.front();
  to_remediate_.pop_front();
  kernel_.schedule_in(std::max(0.0, sim::sample(spec_.remediation_per_host, rng_)), "remediate",
                      [this, host] { remediated(host); });
}

void Defender::remediated(const std::string& host) {
  const double now = kernel_.now();
  if (graph_.state(host).mode != infra::Mode::Operational) {
    graph_.set_state(host, infra::AssetState::operational(now), now);
  }
  timeline_.record(now, EventKind::Remediation, host);
  attacker_.remove_host(host);
  if (attacker_.state().foothold.empty()) {
    timeline_.record(now, EventKind::Eviction);
    if (awareness_) awareness_(false);
  }
  remediate_next();
}

}  // namespace mia::threat
