#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "mia/discovery/ncc.hpp"
#include "mia/flows/flows.hpp"
#include "mia/infra/graph.hpp"

namespace mia::discovery {

struct DirectDependency {
  std::string client;
  flows::ServiceKey service;
  std::size_t flow_count = 0;
  std::int64_t first_seen = 0;
  std::int64_t last_seen = 0;

  bool operator==(const DirectDependency&) const = default;
};

/// One entry per (client, service), sorted by client then service.
std::vector<DirectDependency> direct_dependencies(const std::vector<flows::FlowRecord>& records,
                                                  int registered_port_limit = flows::kRegisteredPortLimit);

struct IndirectDependency {
  flows::Channel upstream;
  flows::Channel downstream;
  int best_lag_bins = 0;
  double best_lag = 0.0;  // seconds
  double score = 0.0;

  bool operator==(const IndirectDependency&) const = default;
};

struct IndirectParams {
  double threshold = 0.8;
  int max_lag = 30;
  std::size_t min_activity = 10;
  double bin_width = 1.0;
  unsigned threads = 1;
};

/// Returns the activity series for a channel, or nullptr when none exists.
using SeriesProvider = std::function<const std::vector<double>*(const flows::Channel&)>;

/// Scores every (A->B, B->C) pair pivoting on host B where both channels carry
/// at least min_activity flows. Pairs whose score reaches the threshold are
/// returned sorted by (pivot, upstream, downstream).
std::vector<IndirectDependency> infer_indirect(const std::vector<DirectDependency>& direct,
                                               const SeriesProvider& series, const IndirectParams& params = {});

struct RetryChain {
  std::string client;
  flows::ServiceKey first_contact;
  flows::ServiceKey fallback;
  std::size_t support = 0;
  double episode_gap = 2.0;

  bool operator==(const RetryChain&) const = default;
};

struct RetryParams {
  double episode_gap = 2.0;
  std::size_t min_support = 20;
  /// Share of the client's flows to the first service that must be followed
  /// by the fallback.
  double dominance = 0.8;
};

std::vector<RetryChain> detect_retry_chains(const std::vector<flows::FlowRecord>& records,
                                            const RetryParams& params = {},
                                            int registered_port_limit = flows::kRegisteredPortLimit);

struct Edge {
  std::string from;
  std::string to;
  std::string kind;

  auto operator<=>(const Edge&) const = default;
};

/// Edge identities used for evaluation: direct edges run client -> service,
/// indirect edges upstream channel -> downstream channel, retry edges
/// "client|first" -> fallback.
std::set<Edge> edges_of(const std::vector<DirectDependency>& direct);
std::set<Edge> edges_of(const std::vector<IndirectDependency>& indirect);
std::set<Edge> edges_of(const std::vector<RetryChain>& chains);

struct EvaluationReport {
  double precision = 1.0;
  double recall = 1.0;
  std::vector<Edge> true_positives;
  std::vector<Edge> false_positives;
  std::vector<Edge> false_negatives;
};

/// 0/0 counts as 1 for both precision and recall.
EvaluationReport evaluate(const std::set<Edge>& discovered, const std::set<Edge>& truth);

/// Hosts seen as clients become device assets and services become service
/// assets ("host:port/proto"). Clients depend on the services they use;
/// upstream services depend on the downstream services their host calls.
/// Retry chains become review annotations on the client.
infra::GraphSpec export_graph(const std::vector<DirectDependency>& direct,
                              const std::vector<IndirectDependency>& indirect,
                              const std::vector<RetryChain>& chains);

enum class Granularity { Channel, Service };

struct DiscoveryParams {
  IndirectParams indirect;
  RetryParams retry;
  flows::Signal signal = flows::Signal::Counts;
  Granularity granularity = Granularity::Channel;
  int registered_port_limit = flows::kRegisteredPortLimit;
};

struct DiscoveryResult {
  std::vector<DirectDependency> direct;
  std::vector<IndirectDependency> indirect;
  std::vector<RetryChain> retry_chains;
  infra::GraphSpec graph;
};

/// Runs the whole pipeline over a record set; the binning window spans the records.
DiscoveryResult discover(const std::vector<flows::FlowRecord>& records, const DiscoveryParams& params = {});

/// Inverse of flows::to_string(ServiceKey). Throws ValidationError.
flows::ServiceKey parse_service_key(const std::string& text);

}  // namespace mia::discovery
