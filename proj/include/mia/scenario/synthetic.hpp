#pragma once

#include <cstdint>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "mia/flows/flows.hpp"

namespace mia::scenario {

struct SynthService {
  std::string id;
  flows::ServiceKey key;
};

/// Poisson traffic from a client to a service.
struct SynthChannel {
  std::string client;
  std::string service;
  double rate_per_s = 0.0;
};

/// Each flow on `upstream` triggers, with probability `prob`, a flow from the
/// upstream service's host to `downstream_service` exactly `lag_s` later.
/// Retry-episode flows count as upstream traffic, and a cascade may use another
/// cascade's downstream channel as its upstream if it is listed after it.
struct SynthCascade {
  SynthChannel upstream;  // rate unused
  std::string downstream_service;
  double lag_s = 1.0;
  double prob = 1.0;
};

/// Episodes at a Poisson rate: client contacts `first`, then `fallback` gap_s later.
struct SynthRetry {
  std::string client;
  std::string first;
  std::string fallback;
  double rate_per_s = 0.0;
  double gap_s = 0.5;
};

struct SynthNoise {
  /// Share of cascade responses perturbed; half of those are dropped and half
  /// shifted by +/- jitter_s.
  double perturb_fraction = 0.0;
  double jitter_s = 1.0;
};

struct SyntheticTopology {
  std::vector<SynthService> services;
  std::vector<SynthChannel> channels;
  std::vector<SynthCascade> cascades;
  std::vector<SynthRetry> retry_chains;
  SynthNoise noise;
  std::int64_t start_us = 1'700'000'000'000'000;
};

/// Throws ValidationError.
SyntheticTopology topology_from_json(const nlohmann::json& doc);

struct GeneratedFlows {
  std::vector<flows::FlowRecord> records;
  /// Ground truth: direct[] (channels present in the traffic), indirect[]
  /// (planted cascades), retry_chains[]; readable by discovery::edges_from_json.
  nlohmann::json truth;
};

/// Records sorted by timestamp, all inside [start, start + duration).
/// Client ports are ephemeral (>= 49152), so every flow is unambiguous.
GeneratedFlows generate_flows(const SyntheticTopology& topology, double duration_s, std::uint64_t seed);

}  // namespace mia::scenario
