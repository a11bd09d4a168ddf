#include "mia/sim/kernel.hpp"

#include <charconv>
#include <cmath>

#include "mia/error.hpp"

namespace mia::sim {

std::string format_trace(const EventTrace& trace) {
  std::string out;
  char buf[64];
  for (const auto& e : trace) {
    auto res = std::to_chars(buf, buf + sizeof buf, e.time);
    out.append(buf, res.ptr);
    out += ' ';
    out += std::to_string(e.seq);
    out += ' ';
    out += e.tag;
    out += ' ';
    out += std::to_string(e.param);
    out += '\n';
  }
  return out;
}

EventId Kernel::schedule(double at, const char* tag, Action action, std::int64_t param) {
  if (std::isnan(at) || at < now_) {
    throw Error(Errc::SchedulingInPast,
                "event '" + std::string(tag) + "' at " + std::to_string(at) + " before clock " +
                    std::to_string(now_));
  }
  const EventId id = next_seq_++;
  queue_.push(Event{at, id, tag, param, std::move(action)});
  live_.insert(id);
  return id;
}

bool Kernel::cancel(EventId id) {
  if (live_.erase(id) == 0) return false;
  cancelled_.insert(id);
  return true;
}

EventTrace Kernel::run_until(double horizon) {
  if (std::isnan(horizon) || horizon < now_) {
    throw Error(Errc::SchedulingInPast, "horizon " + std::to_string(horizon) + " before clock");
  }
  EventTrace trace;
  while (!queue_.empty() && queue_.top().time <= horizon) {
    // priority_queue::top is const; the event is moved out before pop.
    Event ev = std::move(const_cast<Event&>(queue_.top()));
    queue_.pop();
    if (cancelled_.erase(ev.seq) != 0) continue;
    live_.erase(ev.seq);
    now_ = ev.time;
    if (tracing_) trace.push_back(TraceEntry{ev.time, ev.seq, ev.tag, ev.param});
    ev.action();
  }
  now_ = horizon;
  return trace;
}

}  // namespace mia::sim
