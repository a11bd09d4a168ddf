#include "mia/flows/flows.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string_view>

#include "mia/error.hpp"

namespace mia::flows {

namespace {

template <class T>
bool parse_int(std::string_view s, T& out) {
  if (s.empty()) return false;
  auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

// Returns an empty string on success, otherwise the reason.
std::string parse_record(std::string_view line, FlowRecord& r) {
  const auto f = split(line);
  if (f.size() != 8) return "expected 8 fields, found " + std::to_string(f.size());
  if (!parse_int(f[0], r.ts_us) || r.ts_us < 0) return "bad ts_us";
  if (f[1].empty()) return "empty src_ip";
  if (f[3].empty()) return "empty dst_ip";
  r.src_host = std::string(f[1]);
  r.dst_host = std::string(f[3]);
  if (!parse_int(f[2], r.src_port) || r.src_port < 0 || r.src_port > 65535) return "src_port out of range";
  if (!parse_int(f[4], r.dst_port) || r.dst_port < 0 || r.dst_port > 65535) return "dst_port out of range";
  if (f[5] == "tcp") {
    r.proto = Proto::Tcp;
  } else if (f[5] == "udp") {
    r.proto = Proto::Udp;
  } else {
    return "proto must be tcp or udp";
  }
  if (!parse_int(f[6], r.bytes)) return "bad bytes";
  if (!parse_int(f[7], r.packets) || r.packets < 1) return "packets must be >= 1";
  return {};
}

std::int64_t bin_width_us(double bin_width) {
  const double w = std::round(bin_width * 1e6);
  if (!(w >= 1.0)) throw Error(Errc::ValidationError, "bin_width must be at least one microsecond");
  return static_cast<std::int64_t>(w);
}

std::size_t bin_count(Window window, std::int64_t w) {
  if (window.t1_us <= window.t0_us) throw Error(Errc::EmptyWindow, "window end must follow its start");
  return static_cast<std::size_t>((window.t1_us - window.t0_us + w - 1) / w);
}

// End of the last bin, which may lie past t1.
std::int64_t covered_end(Window window, std::int64_t w, std::size_t bins) {
  return window.t0_us + w * static_cast<std::int64_t>(bins);
}

}  // namespace

const char* to_string(Proto proto) { return proto == Proto::Tcp ? "tcp" : "udp"; }

std::string to_string(const ServiceKey& key) {
  return key.host + ":" + std::to_string(key.port) + "/" + to_string(key.proto);
}

std::string to_string(const Channel& channel) { return channel.client + "->" + to_string(channel.service); }

ParseResult parse_flows(std::istream& in, bool strict) {
  ParseResult out;
  std::string line;
  if (!std::getline(in, line)) return out;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kFlowHeader) throw Error(Errc::MalformedLine, "line 1: unexpected header");
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    FlowRecord r;
    const std::string reason = parse_record(line, r);
    if (reason.empty()) {
      out.records.push_back(std::move(r));
      continue;
    }
    const std::string message = "line " + std::to_string(lineno) + ": " + reason;
    if (strict) throw Error(Errc::MalformedLine, message);
    ++out.skipped;
    out.diagnostics.push_back(message);
  }
  return out;
}

void write_flows(std::ostream& out, const std::vector<FlowRecord>& records) {
  out << kFlowHeader << '\n';
  for (const auto& r : records) {
    out << r.ts_us << ',' << r.src_host << ',' << r.src_port << ',' << r.dst_host << ',' << r.dst_port << ','
        << to_string(r.proto) << ',' << r.bytes << ',' << r.packets << '\n';
  }
}

Attribution attribute(const FlowRecord& flow, int limit) {
  const bool src_registered = flow.src_port <= limit;
  const bool dst_registered = flow.dst_port <= limit;
  bool service_is_src;
  if (src_registered != dst_registered) {
    service_is_src = src_registered;
  } else {
    service_is_src = flow.src_port < flow.dst_port;
  }
  Attribution a;
  a.ambiguous = !src_registered && !dst_registered;
  if (service_is_src) {
    a.client = flow.dst_host;
    a.service = {flow.src_host, flow.src_port, flow.proto};
  } else {
    a.client = flow.src_host;
    a.service = {flow.dst_host, flow.dst_port, flow.proto};
  }
  return a;
}

std::map<ServiceKey, ServiceInfo> identify_services(const std::vector<FlowRecord>& records, int limit) {
  std::map<ServiceKey, ServiceInfo> out;
  for (const auto& r : records) {
    const Attribution a = attribute(r, limit);
    auto& info = out[a.service];
    ++info.flows;
    if (a.ambiguous) ++info.ambiguous_flows;
  }
  return out;
}

Window span_of(const std::vector<FlowRecord>& records) {
  if (records.empty()) throw Error(Errc::EmptyWindow, "no records");
  auto [lo, hi] = std::minmax_element(records.begin(), records.end(),
                                      [](const FlowRecord& a, const FlowRecord& b) { return a.ts_us < b.ts_us; });
  return {lo->ts_us, hi->ts_us + 1};
}

ChannelSeries bin_activity(const std::vector<FlowRecord>& records, const Channel& channel, double bin_width,
                           Window window, Signal signal, int limit) {
  const std::int64_t w = bin_width_us(bin_width);
  ChannelSeries s{channel, bin_width, window.t0_us, std::vector<double>(bin_count(window, w), 0.0)};
  const std::int64_t end = covered_end(window, w, s.counts.size());
  for (const auto& r : records) {
    if (r.ts_us < window.t0_us || r.ts_us >= end) continue;
    const Attribution a = attribute(r, limit);
    if (a.client != channel.client || a.service != channel.service) continue;
    s.counts[static_cast<std::size_t>((r.ts_us - window.t0_us) / w)] +=
        signal == Signal::Counts ? 1.0 : static_cast<double>(r.bytes);
  }
  return s;
}

std::map<Channel, ChannelSeries> bin_all_channels(const std::vector<FlowRecord>& records, double bin_width,
                                                  Window window, Signal signal, int limit) {
  const std::int64_t w = bin_width_us(bin_width);
  const std::size_t n = bin_count(window, w);
  const std::int64_t end = covered_end(window, w, n);
  std::map<Channel, ChannelSeries> out;
  for (const auto& r : records) {
    const Attribution a = attribute(r, limit);
    Channel c{a.client, a.service};
    auto it = out.find(c);
    if (it == out.end()) it = out.emplace(c, ChannelSeries{c, bin_width, window.t0_us, std::vector<double>(n)}).first;
    if (r.ts_us < window.t0_us || r.ts_us >= end) continue;
    it->second.counts[static_cast<std::size_t>((r.ts_us - window.t0_us) / w)] +=
        signal == Signal::Counts ? 1.0 : static_cast<double>(r.bytes);
  }
  return out;
}

std::map<ServiceKey, ChannelSeries> bin_all_services(const std::vector<FlowRecord>& records, double bin_width,
                                                     Window window, Signal signal, int limit) {
  std::map<ServiceKey, ChannelSeries> out;
  for (auto& [channel, series] : bin_all_channels(records, bin_width, window, signal, limit)) {
    auto it = out.find(channel.service);
    if (it == out.end()) {
      ChannelSeries agg = series;
      agg.channel.client.clear();
      out.emplace(channel.service, std::move(agg));
      continue;
    }
    for (std::size_t i = 0; i < series.counts.size(); ++i) it->second.counts[i] += series.counts[i];
  }
  return out;
}

}  // namespace mia::flows
