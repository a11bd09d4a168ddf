#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace mia::infra {

enum class AssetKind { Device, Service, Application, EndUserNode, ExternalLink };

struct Asset {
  std::string id;
  AssetKind kind = AssetKind::Device;
  std::string name;
  /// Swim-lane grouping; assets sharing a subnet are mutually reachable.
  std::optional<std::string> subnet;
};

enum class EdgeKind { Declared, DiscoveredDirect, DiscoveredIndirect };

/// `from` depends on `to`.
struct DependencyEdge {
  std::string from;
  std::string to;
  EdgeKind kind = EdgeKind::Declared;
  /// Degree of reliance in (0, 1]. Carried for reporting only.
  double weight = 1.0;
  /// Edges of one asset sharing a non-empty group name are redundant
  /// alternatives: any one of them suffices.
  std::string any_of_group;
};

struct Vulnerability {
  std::string asset;
  std::string exploit_id;
};

/// Free-form finding attached to an asset, e.g. a retry chain awaiting review.
struct Annotation {
  std::string kind;
  std::string asset;
  std::map<std::string, std::string> fields;
  bool needs_review = false;
};

enum class Mode { Operational, Degraded, Unavailable, IntegrityCompromised, ConfidentialityCompromised };

struct AssetState {
  Mode mode = Mode::Operational;
  /// Meaningful only for Degraded, strictly inside (0, 1).
  double factor = 1.0;
  double since = 0.0;

  static AssetState operational(double since = 0.0) { return {Mode::Operational, 1.0, since}; }
  static AssetState degraded(double factor, double since = 0.0) { return {Mode::Degraded, factor, since}; }
  static AssetState unavailable(double since = 0.0) { return {Mode::Unavailable, 0.0, since}; }
  static AssetState integrity(double since = 0.0) { return {Mode::IntegrityCompromised, 1.0, since}; }
  static AssetState confidentiality(double since = 0.0) {
    return {Mode::ConfidentialityCompromised, 1.0, since};
  }

  /// Contribution of this state alone to the asset's performance.
  double own_factor() const noexcept;
};

struct StateChange {
  std::string asset;
  AssetState before;
  AssetState after;
  double at = 0.0;
};

struct GraphSpec {
  std::vector<Asset> assets;
  std::vector<DependencyEdge> edges;
  std::vector<Vulnerability> vulnerabilities;
  std::vector<Annotation> annotations;
};

class InfrastructureGraph;

/// Validates a GraphSpec and returns a graph with every asset operational at t=0.
/// Throws DanglingReference, DuplicateId or SelfLoop.
InfrastructureGraph build_graph(const GraphSpec& spec);

class InfrastructureGraph {
 public:
  using Listener = std::function<void(const StateChange&)>;

  InfrastructureGraph() = default;

  const GraphSpec& spec() const noexcept { return spec_; }
  const std::vector<Asset>& assets() const noexcept { return spec_.assets; }
  const std::vector<DependencyEdge>& edges() const noexcept { return spec_.edges; }
  const std::vector<Vulnerability>& vulnerabilities() const noexcept { return spec_.vulnerabilities; }
  std::size_t size() const noexcept { return spec_.assets.size(); }

  bool contains(const std::string& id) const { return index_.count(id) != 0; }
  /// Throws UnknownAsset.
  std::size_t index_of(const std::string& id) const;
  const Asset& asset(const std::string& id) const { return spec_.assets[index_of(id)]; }

  /// Edge indices leaving / entering an asset.
  const std::vector<std::size_t>& dependencies_of(std::size_t asset) const { return out_[asset]; }
  const std::vector<std::size_t>& dependents_of(std::size_t asset) const { return in_[asset]; }
  std::size_t edge_source(std::size_t edge) const { return edge_from_[edge]; }
  std::size_t edge_target(std::size_t edge) const { return edge_to_[edge]; }

  /// Assets sharing a subnet with, or linked by an edge in either direction to,
  /// `asset`. Sorted by id, without `asset` itself.
  std::vector<std::size_t> neighbours(std::size_t asset) const;

  /// Exploit ids applicable to an asset.
  const std::set<std::string>& exploits_on(std::size_t asset) const { return exploits_[asset]; }

  const AssetState& state(const std::string& id) const { return states_[index_of(id)]; }
  const AssetState& state(std::size_t asset) const { return states_[asset]; }

  /// Throws UnknownAsset, TimeRegression, or InvalidState for a degraded
  /// factor outside (0, 1).
  StateChange set_state(const std::string& id, AssetState next, double at);
  const std::vector<StateChange>& history() const noexcept { return history_; }

  /// Own-state factor times the weakest required dependency, composed
  /// multiplicatively along chains. Members of a dependency cycle share one
  /// value: the minimum own-state factor in the cycle times the weakest
  /// dependency leaving the cycle. Throws UnknownAsset.
  double effective_performance(const std::string& id) const { return perf_[index_of(id)]; }
  double effective_performance(std::size_t asset) const { return perf_[asset]; }

  void subscribe(Listener listener) { listeners_.push_back(std::move(listener)); }

 private:
  friend InfrastructureGraph build_graph(const GraphSpec& spec);
  void recompute_performance();

  GraphSpec spec_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<std::vector<std::size_t>> in_;
  std::vector<std::size_t> edge_to_;
  std::vector<std::size_t> edge_from_;
  std::vector<std::set<std::string>> exploits_;
  std::vector<AssetState> states_;
  std::vector<double> perf_;
  std::vector<StateChange> history_;
  std::vector<Listener> listeners_;
};

/// Every asset that transitively depends on some member of `seeds`,
/// the seeds included. Throws UnknownAsset.
std::set<std::string> reachable_dependents(const InfrastructureGraph& graph,
                                           const std::set<std::string>& seeds);

struct TaskImpact {
  std::string task;
  bool impacted = false;
  /// Required asset first, compromised asset last; empty when clear.
  std::vector<std::string> chain;
};

struct StaticImpactReport {
  std::vector<TaskImpact> tasks;  // ordered by task id

  const TaskImpact* find(const std::string& task) const;
};

using MissionBindings = std::map<std::string, std::vector<std::string>>;

/// Time-free impact estimate: a task is impacted iff one of its required assets
/// depends, directly or transitively, on a compromised asset.
/// Throws UnknownAsset for unknown compromised or bound assets, UnknownTask for
/// an empty task id.
StaticImpactReport propagate_static_impact(const InfrastructureGraph& graph,
                                           const std::set<std::string>& compromised,
                                           const MissionBindings& bindings);

const char* to_string(AssetKind kind);
const char* to_string(EdgeKind kind);
const char* to_string(Mode mode);
std::optional<AssetKind> asset_kind_from(std::string_view name);
std::optional<EdgeKind> edge_kind_from(std::string_view name);

}  // namespace mia::infra
