#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <string>
#include <unordered_set>
#include <vector>

namespace mia::sim {

using EventId = std::uint64_t;

/// One dispatched event as seen in a trace. `tag` points at a string literal
/// owned by the scheduling component.
struct TraceEntry {
  double time = 0.0;
  std::uint64_t seq = 0;
  const char* tag = "";
  std::int64_t param = 0;
};

using EventTrace = std::vector<TraceEntry>;

/// Renders a trace as text, one event per line, with round-trippable times.
std::string format_trace(const EventTrace& trace);

/// Single-threaded discrete-event engine. Events run in (time, seq) order, so
/// equal-time events keep their scheduling order.
class Kernel {
 public:
  using Action = std::function<void()>;

  double now() const noexcept { return now_; }

  /// Throws Errc::SchedulingInPast when `at` is earlier than now().
  EventId schedule(double at, const char* tag, Action action, std::int64_t param = 0);
  EventId schedule_in(double delay, const char* tag, Action action, std::int64_t param = 0) {
    return schedule(now_ + delay, tag, std::move(action), param);
  }

  /// Returns false when the event already ran or was never scheduled.
  bool cancel(EventId id);

  /// Dispatches every pending event with time <= horizon, then advances the
  /// clock to the horizon. Events scheduled past the horizon stay queued.
  EventTrace run_until(double horizon);

  std::size_t pending() const noexcept { return queue_.size() - cancelled_.size(); }

  /// Trace recording can be switched off for long batch runs.
  void set_tracing(bool on) noexcept { tracing_ = on; }

 private:
  struct Event {
    double time;
    std::uint64_t seq;
    const char* tag;
    std::int64_t param;
    Action action;
  };
  struct Later {
    bool operator()(const Event& a, const Event& b) const noexcept {
      return a.time != b.time ? a.time > b.time : a.seq > b.seq;
    }
  };

  double now_ = 0.0;
  std::uint64_t next_seq_ = 0;
  bool tracing_ = true;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  std::unordered_set<EventId> cancelled_;
  std::unordered_set<EventId> live_;
};

}  // namespace mia::sim
