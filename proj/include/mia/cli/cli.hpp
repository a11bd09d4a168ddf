#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mia/discovery/discovery.hpp"

namespace mia::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

/// Parses `args` (without the program name) and runs the subcommand. Library
/// errors become exit 1 with a diagnostic on `err`; bad flags exit 2.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct DiscoverOptions {
  std::string flows;
  std::string out;  // empty: stdout
  bool lenient = false;
  discovery::DiscoveryParams params;
};

struct SimulateOptions {
  std::string scenario;
  std::string out;
  std::string summary;  // empty: stdout
  std::string baseline_out;
  std::optional<std::size_t> replications;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  bool baseline = false;
  double threshold = 0.10;
};

struct PropagateOptions {
  std::string graph;
  std::string mission;
  std::vector<std::string> compromised;
  std::string out;
};

struct GenFlowsOptions {
  std::string topology;
  double duration = 3600.0;
  std::uint64_t seed = 1;
  std::string out;
  std::string truth;
};

struct ReportOptions {
  std::string metrics;
  std::string baseline;
  double threshold = 0.10;
};

int cmd_discover(const DiscoverOptions& o, std::ostream& out);
int cmd_simulate(const SimulateOptions& o, std::ostream& out);
int cmd_propagate(const PropagateOptions& o, std::ostream& out);
int cmd_gen_flows(const GenFlowsOptions& o, std::ostream& out);
int cmd_report(const ReportOptions& o, std::ostream& out);

}  // namespace mia::cli
