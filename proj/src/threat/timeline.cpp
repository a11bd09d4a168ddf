#include "mia/threat/timeline.hpp"

#include <algorithm>

#include "mia/error.hpp"

namespace mia::threat {

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::AttackStart: return "attack_start";
    case EventKind::AccessSuccess: return "access_success";
    case EventKind::LateralMove: return "lateral_move";
    case EventKind::ExploitationSuccess: return "exploitation_success";
    case EventKind::EffectOnset: return "effect_onset";
    case EventKind::Detection: return "detection";
    case EventKind::ForensicsComplete: return "forensics_complete";
    case EventKind::HostFound: return "host_found";
    case EventKind::Remediation: return "remediation";
    case EventKind::Eviction: return "eviction";
  }
  return "unknown";
}

void AttackTimeline::record(double time, EventKind kind, std::string asset, std::string detail) {
  if (!events_.empty() && time < events_.back().time) {
    throw Error(Errc::TimeRegression, std::string(to_string(kind)) + " recorded before the previous event");
  }
  events_.push_back({time, kind, std::move(asset), std::move(detail)});
}

const TimelineEvent* AttackTimeline::first(EventKind kind) const {
  auto it = std::find_if(events_.begin(), events_.end(), [&](const TimelineEvent& e) { return e.kind == kind; });
  return it == events_.end() ? nullptr : &*it;
}

std::size_t AttackTimeline::count(EventKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(events_.begin(), events_.end(), [&](const TimelineEvent& e) { return e.kind == kind; }));
}

AttackDuration attack_duration(const AttackTimeline& timeline, double horizon) {
  const TimelineEvent* onset = timeline.first(EventKind::EffectOnset);
  if (!onset) throw Error(Errc::MissingOnset, "timeline has no effect onset");
  if (const TimelineEvent* eviction = timeline.first(EventKind::Eviction)) {
    return {eviction->time - onset->time, false};
  }
  return {std::max(0.0, horizon - onset->time), true};
}

double confidentiality_exposure(const AttackTimeline& timeline, double horizon) {
  const TimelineEvent* onset = timeline.first(EventKind::EffectOnset);
  if (!onset || onset->detail != "confidentiality") return 0.0;
  return attack_duration(timeline, horizon).seconds;
}

}  // namespace mia::threat
