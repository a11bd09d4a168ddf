#pragma once

#include <compare>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace mia::flows {

enum class Proto { Tcp, Udp };
const char* to_string(Proto proto);

struct FlowRecord {
  std::int64_t ts_us = 0;
  std::string src_host;
  int src_port = 0;
  std::string dst_host;
  int dst_port = 0;
  Proto proto = Proto::Tcp;
  std::uint64_t bytes = 0;
  std::uint64_t packets = 1;

  bool operator==(const FlowRecord&) const = default;
};

inline constexpr const char* kFlowHeader = "ts_us,src_ip,src_port,dst_ip,dst_port,proto,bytes,packets";
inline constexpr int kRegisteredPortLimit = 49151;

struct ParseResult {
  std::vector<FlowRecord> records;
  /// Lenient mode only: malformed lines skipped, with their diagnostics.
  std::size_t skipped = 0;
  std::vector<std::string> diagnostics;
};

/// Strict mode throws MalformedLine naming the 1-based line; lenient mode
/// skips and tallies. A completely empty input yields no records.
ParseResult parse_flows(std::istream& in, bool strict = true);
void write_flows(std::ostream& out, const std::vector<FlowRecord>& records);

struct ServiceKey {
  std::string host;
  int port = 0;
  Proto proto = Proto::Tcp;

  auto operator<=>(const ServiceKey&) const = default;
};

/// "host:port/proto".
std::string to_string(const ServiceKey& key);

struct Attribution {
  std::string client;
  ServiceKey service;
  bool ambiguous = false;
};

/// The service side is the endpoint at or below the registered-port limit with
/// the lower port (destination on equal ports). When both ports exceed the
/// limit, the lower port is taken and the result flagged ambiguous.
Attribution attribute(const FlowRecord& flow, int registered_port_limit = kRegisteredPortLimit);

struct ServiceInfo {
  std::size_t flows = 0;
  std::size_t ambiguous_flows = 0;
  bool ambiguous() const noexcept { return ambiguous_flows > 0; }
};

std::map<ServiceKey, ServiceInfo> identify_services(const std::vector<FlowRecord>& records,
                                                    int registered_port_limit = kRegisteredPortLimit);

/// A client talking to a service.
struct Channel {
  std::string client;
  ServiceKey service;

  auto operator<=>(const Channel&) const = default;
};

std::string to_string(const Channel& channel);

enum class Signal { Counts, Bytes };

struct Window {
  std::int64_t t0_us = 0;
  std::int64_t t1_us = 0;
};

/// [earliest ts, latest ts + 1); throws EmptyWindow for no records.
Window span_of(const std::vector<FlowRecord>& records);

struct ChannelSeries {
  Channel channel;
  double bin_width = 1.0;
  std::int64_t start_us = 0;
  std::vector<double> counts;
};

/// Bin i covers [t0 + i*w, t0 + (i+1)*w), with ceil((t1 - t0) / w) bins; the
/// last one may reach past t1. Throws EmptyWindow when t1 <= t0 and
/// ValidationError for a bin width below one microsecond.
ChannelSeries bin_activity(const std::vector<FlowRecord>& records, const Channel& channel, double bin_width,
                           Window window, Signal signal = Signal::Counts,
                           int registered_port_limit = kRegisteredPortLimit);

/// Every channel binned in one pass over the records.
std::map<Channel, ChannelSeries> bin_all_channels(const std::vector<FlowRecord>& records, double bin_width,
                                                  Window window, Signal signal = Signal::Counts,
                                                  int registered_port_limit = kRegisteredPortLimit);

/// Per-service aggregate: all clients of a service summed into one series
/// (the series' channel has an empty client).
std::map<ServiceKey, ChannelSeries> bin_all_services(const std::vector<FlowRecord>& records, double bin_width,
                                                     Window window, Signal signal = Signal::Counts,
                                                     int registered_port_limit = kRegisteredPortLimit);

}  // namespace mia::flows
