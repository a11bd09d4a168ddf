#include "mia/mission/mission_spec.hpp"

namespace mia::mission {

CheckpointOutcome apply_checkpoint(std::vector<WorkItem>& items, double at, bool /*defender_aware*/) {
  CheckpointOutcome out;
  for (auto& item : items) {
    const bool in_flight = item.outcome == Outcome::InProgress;
    const bool awaiting_check = item.completed() && !item.sealed && item.completed_at && *item.completed_at <= at;
    if (!in_flight && !awaiting_check) continue;

    if (!item.tainted) {
      if (awaiting_check) item.sealed = true;
      out.cleared.push_back(item.id);
      continue;
    }
    item.tainted = false;
    item.taint_sources.clear();
    ++item.rework_count;
    out.rework.push_back(item.id);
    if (awaiting_check) {
      item.outcome = Outcome::InProgress;
      item.completed_at.reset();
      out.reopened.push_back(item.id);
    }
  }
  return out;
}

}  // namespace mia::mission
