#include "mia/infra/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mia/error.hpp"

namespace mia::infra {

double AssetState::own_factor() const noexcept {
  switch (mode) {
    case Mode::Degraded: return factor;
    case Mode::Unavailable: return 0.0;
    default: return 1.0;
  }
}

InfrastructureGraph build_graph(const GraphSpec& spec) {
  InfrastructureGraph g;
  g.spec_ = spec;
  const std::size_t n = spec.assets.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = spec.assets[i];
    if (a.id.empty()) throw Error(Errc::ValidationError, "asset with empty id");
    if (!g.index_.emplace(a.id, i).second) throw Error(Errc::DuplicateId, "asset '" + a.id + "'");
  }
  auto lookup = [&](const std::string& id, const std::string& context) {
    auto it = g.index_.find(id);
    if (it == g.index_.end()) throw Error(Errc::DanglingReference, context + " references unknown asset '" + id + "'");
    return it->second;
  };

  g.out_.assign(n, {});
  g.in_.assign(n, {});
  g.exploits_.assign(n, {});
  for (std::size_t e = 0; e < spec.edges.size(); ++e) {
    const auto& edge = spec.edges[e];
    const std::size_t from = lookup(edge.from, "edge");
    const std::size_t to = lookup(edge.to, "edge");
    if (from == to) throw Error(Errc::SelfLoop, "edge on '" + edge.from + "'");
    if (!(edge.weight > 0.0 && edge.weight <= 1.0)) {
      throw Error(Errc::ValidationError, "edge " + edge.from + "->" + edge.to + " weight must be in (0,1]");
    }
    g.edge_from_.push_back(from);
    g.edge_to_.push_back(to);
    g.out_[from].push_back(e);
    g.in_[to].push_back(e);
  }
  for (const auto& v : spec.vulnerabilities) {
    g.exploits_[lookup(v.asset, "vulnerability")].insert(v.exploit_id);
  }
  for (const auto& ann : spec.annotations) {
    if (!ann.asset.empty()) lookup(ann.asset, "annotation");
  }
  g.states_.assign(n, AssetState::operational(0.0));
  g.recompute_performance();
  return g;
}

std::size_t InfrastructureGraph::index_of(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw Error(Errc::UnknownAsset, "'" + id + "'");
  return it->second;
}

std::vector<std::size_t> InfrastructureGraph::neighbours(std::size_t asset) const {
  std::set<std::size_t> found;
  const auto& subnet = spec_.assets[asset].subnet;
  if (subnet) {
    for (std::size_t i = 0; i < spec_.assets.size(); ++i) {
      if (i != asset && spec_.assets[i].subnet == subnet) found.insert(i);
    }
  }
  for (std::size_t e : out_[asset]) found.insert(edge_to_[e]);
  for (std::size_t e : in_[asset]) found.insert(edge_from_[e]);
  std::vector<std::size_t> out(found.begin(), found.end());
  std::sort(out.begin(), out.end(),
            [&](std::size_t a, std::size_t b) { return spec_.assets[a].id < spec_.assets[b].id; });
  return out;
}

StateChange InfrastructureGraph::set_state(const std::string& id, AssetState next, double at) {
  const std::size_t i = index_of(id);
  if (at < states_[i].since) {
    throw Error(Errc::TimeRegression, "'" + id + "' at " + std::to_string(at) + " before " +
                                          std::to_string(states_[i].since));
  }
  if (next.mode == Mode::Degraded && !(next.factor > 0.0 && next.factor < 1.0)) {
    throw Error(Errc::InvalidState, "degraded factor must be in (0,1)");
  }
  if (next.mode != Mode::Degraded) next.factor = next.mode == Mode::Unavailable ? 0.0 : 1.0;
  next.since = at;
  StateChange change{id, states_[i], next, at};
  states_[i] = next;
  history_.push_back(change);
  recompute_performance();
  for (const auto& l : listeners_) l(change);
  return change;
}

// Tarjan's SCC algorithm emits a component only after every component it
// depends on, so one pass over the emitted order evaluates dependencies first.
void InfrastructureGraph::recompute_performance() {
  const std::size_t n = spec_.assets.size();
  constexpr std::size_t unvisited = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> index(n, unvisited), low(n, 0), comp(n, unvisited);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> components;
  std::size_t counter = 0;

  struct Frame {
    std::size_t v;
    std::size_t next_edge;
  };
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != unvisited) continue;
    std::vector<Frame> frames{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.next_edge < out_[f.v].size()) {
        const std::size_t w = edge_to_[out_[f.v][f.next_edge++]];
        if (index[w] == unvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      const std::size_t v = f.v;
      frames.pop_back();
      if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
      if (low[v] == index[v]) {
        std::vector<std::size_t> members;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = components.size();
          members.push_back(w);
        } while (w != v);
        components.push_back(std::move(members));
      }
    }
  }

  perf_.assign(n, 1.0);
  for (std::size_t c = 0; c < components.size(); ++c) {
    const auto& members = components[c];
    double own = 1.0;
    for (std::size_t m : members) own = std::min(own, states_[m].own_factor());

    double weakest = 1.0;
    for (std::size_t m : members) {
      std::map<std::string, double> groups;
      for (std::size_t e : out_[m]) {
        const std::size_t to = edge_to_[e];
        const double value = comp[to] == c ? own : perf_[to];
        const auto& group = spec_.edges[e].any_of_group;
        if (group.empty()) {
          if (comp[to] != c) weakest = std::min(weakest, value);
        } else {
          auto [it, inserted] = groups.emplace(group, value);
          if (!inserted) it->second = std::max(it->second, value);
        }
      }
      for (const auto& [name, best] : groups) weakest = std::min(weakest, best);
    }
    const double value = own * weakest;
    for (std::size_t m : members) perf_[m] = value;
  }
}

std::set<std::string> reachable_dependents(const InfrastructureGraph& graph,
                                           const std::set<std::string>& seeds) {
  std::vector<bool> seen(graph.size(), false);
  std::vector<std::size_t> frontier;
  for (const auto& id : seeds) {
    const std::size_t i = graph.index_of(id);
    if (!seen[i]) {
      seen[i] = true;
      frontier.push_back(i);
    }
  }
  while (!frontier.empty()) {
    const std::size_t v = frontier.back();
    frontier.pop_back();
    for (std::size_t e : graph.dependents_of(v)) {
      const std::size_t u = graph.edge_source(e);
      if (!seen[u]) {
        seen[u] = true;
        frontier.push_back(u);
      }
    }
  }
  std::set<std::string> out;
  for (std::size_t i = 0; i < graph.size(); ++i) {
    if (seen[i]) out.insert(graph.assets()[i].id);
  }
  return out;
}

const char* to_string(AssetKind kind) {
  switch (kind) {
    case AssetKind::Device: return "device";
    case AssetKind::Service: return "service";
    case AssetKind::Application: return "application";
    case AssetKind::EndUserNode: return "end_user_node";
    case AssetKind::ExternalLink: return "external_link";
  }
  return "device";
}

const char* to_string(EdgeKind kind) {
  switch (kind) {
    case EdgeKind::Declared: return "declared";
    case EdgeKind::DiscoveredDirect: return "discovered_direct";
    case EdgeKind::DiscoveredIndirect: return "discovered_indirect";
  }
  return "declared";
}

const char* to_string(Mode mode) {
  switch (mode) {
    case Mode::Operational: return "operational";
    case Mode::Degraded: return "degraded";
    case Mode::Unavailable: return "unavailable";
    case Mode::IntegrityCompromised: return "integrity_compromised";
    case Mode::ConfidentialityCompromised: return "confidentiality_compromised";
  }
  return "operational";
}

std::optional<AssetKind> asset_kind_from(std::string_view name) {
  for (auto k : {AssetKind::Device, AssetKind::Service, AssetKind::Application, AssetKind::EndUserNode,
                 AssetKind::ExternalLink}) {
    if (name == to_string(k)) return k;
  }
  return std::nullopt;
}

std::optional<EdgeKind> edge_kind_from(std::string_view name) {
  for (auto k : {EdgeKind::Declared, EdgeKind::DiscoveredDirect, EdgeKind::DiscoveredIndirect}) {
    if (name == to_string(k)) return k;
  }
  return std::nullopt;
}

}  // namespace mia::infra
