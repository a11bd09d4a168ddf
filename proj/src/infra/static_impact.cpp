#include <algorithm>
#include <deque>
#include <limits>

#include "mia/error.hpp"
#include "mia/infra/graph.hpp"

namespace mia::infra {

const TaskImpact* StaticImpactReport::find(const std::string& task) const {
  auto it = std::find_if(tasks.begin(), tasks.end(), [&](const TaskImpact& t) { return t.task == task; });
  return it == tasks.end() ? nullptr : &*it;
}

StaticImpactReport propagate_static_impact(const InfrastructureGraph& graph,
                                           const std::set<std::string>& compromised,
                                           const MissionBindings& bindings) {
  constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
  const std::size_t n = graph.size();

  // Breadth-first from the compromised set against edge direction; `towards`
  // records the dependency each dependent was reached through.
  std::vector<bool> reached(n, false);
  std::vector<std::size_t> towards(n, none);
  std::deque<std::size_t> queue;
  for (const auto& id : compromised) {
    const std::size_t i = graph.index_of(id);
    reached[i] = true;
    queue.push_back(i);
  }
  while (!queue.empty()) {
    const std::size_t v = queue.front();
    queue.pop_front();
    std::vector<std::size_t> next;
    for (std::size_t e : graph.dependents_of(v)) next.push_back(graph.edge_source(e));
    std::sort(next.begin(), next.end(),
              [&](std::size_t a, std::size_t b) { return graph.assets()[a].id < graph.assets()[b].id; });
    for (std::size_t u : next) {
      if (reached[u]) continue;
      reached[u] = true;
      towards[u] = v;
      queue.push_back(u);
    }
  }

  StaticImpactReport report;
  for (const auto& [task, required] : bindings) {
    if (task.empty()) throw Error(Errc::UnknownTask, "binding with empty task id");
    TaskImpact impact{task, false, {}};
    std::vector<std::size_t> sorted;
    for (const auto& id : required) sorted.push_back(graph.index_of(id));
    std::sort(sorted.begin(), sorted.end(),
              [&](std::size_t a, std::size_t b) { return graph.assets()[a].id < graph.assets()[b].id; });
    for (std::size_t r : sorted) {
      if (!reached[r]) continue;
      impact.impacted = true;
      for (std::size_t v = r; v != none; v = towards[v]) impact.chain.push_back(graph.assets()[v].id);
      break;
    }
    report.tasks.push_back(std::move(impact));
  }
  return report;
}

}  // namespace mia::infra
