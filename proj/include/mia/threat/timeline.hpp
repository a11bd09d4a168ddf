#pragma once

#include <optional>
#include <string>
#include <vector>

namespace mia::threat {

enum class EventKind {
  AttackStart,
  AccessSuccess,
  LateralMove,
  ExploitationSuccess,
  EffectOnset,
  Detection,
  ForensicsComplete,
  HostFound,
  Remediation,
  Eviction,
};

const char* to_string(EventKind kind);

struct TimelineEvent {
  double time = 0.0;
  EventKind kind = EventKind::AttackStart;
  std::string asset;
  /// Effect name for EffectOnset, otherwise empty.
  std::string detail;
};

/// Append-only record of attacker and defender actions in one replication.
class AttackTimeline {
 public:
  /// Throws TimeRegression when `time` precedes the last recorded event.
  void record(double time, EventKind kind, std::string asset = {}, std::string detail = {});

  const std::vector<TimelineEvent>& events() const noexcept { return events_; }
  bool empty() const noexcept { return events_.empty(); }
  const TimelineEvent* first(EventKind kind) const;
  std::size_t count(EventKind kind) const;

 private:
  std::vector<TimelineEvent> events_;
};

struct AttackDuration {
  double seconds = 0.0;
  /// True when the attacker was never evicted and the duration runs to the horizon.
  bool open_ended = false;
};

/// Eviction time minus effect onset, or horizon minus onset when never
/// evicted. Throws MissingOnset.
AttackDuration attack_duration(const AttackTimeline& timeline, double horizon);

/// Seconds a confidentiality effect was active; zero for other effects or no onset.
double confidentiality_exposure(const AttackTimeline& timeline, double horizon);

}  // namespace mia::threat
