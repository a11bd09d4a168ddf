#include "mia/discovery/discovery_json.hpp"

#include "mia/infra/graph_json.hpp"
#include "mia/json_util.hpp"

namespace mia::discovery {

using nlohmann::json;
namespace ju = json_util;

namespace {

json channel_json(const flows::Channel& c) {
  return {{"client", c.client}, {"service", flows::to_string(c.service)}};
}

flows::Channel channel_from(const json& j, const std::string& path) {
  return {ju::get<std::string>(j, "client", path), parse_service_key(ju::get<std::string>(j, "service", path))};
}

const char* name(flows::Signal s) { return s == flows::Signal::Counts ? "counts" : "bytes"; }
const char* name(Granularity g) { return g == Granularity::Channel ? "channel" : "service"; }

}  // namespace

json to_json(const DiscoveryParams& p) {
  return {{"bin_width_s", p.indirect.bin_width},
          {"max_lag_bins", p.indirect.max_lag},
          {"ncc_threshold", p.indirect.threshold},
          {"min_activity", p.indirect.min_activity},
          {"episode_gap_s", p.retry.episode_gap},
          {"min_support", p.retry.min_support},
          {"dominance", p.retry.dominance},
          {"signal", name(p.signal)},
          {"granularity", name(p.granularity)},
          {"registered_port_limit", p.registered_port_limit}};
}

json to_json(const DiscoveryResult& r, const DiscoveryParams& params) {
  json direct = json::array();
  for (const auto& d : r.direct) {
    direct.push_back({{"client", d.client},
                      {"service", flows::to_string(d.service)},
                      {"flow_count", d.flow_count},
                      {"first_seen_us", d.first_seen},
                      {"last_seen_us", d.last_seen}});
  }
  json indirect = json::array();
  for (const auto& i : r.indirect) {
    indirect.push_back({{"upstream", channel_json(i.upstream)},
                        {"downstream", channel_json(i.downstream)},
                        {"best_lag_bins", i.best_lag_bins},
                        {"best_lag_s", i.best_lag},
                        {"score", i.score}});
  }
  json chains = json::array();
  for (const auto& c : r.retry_chains) {
    chains.push_back({{"client", c.client},
                      {"first_contact", flows::to_string(c.first_contact)},
                      {"fallback", flows::to_string(c.fallback)},
                      {"support", c.support},
                      {"episode_gap_s", c.episode_gap}});
  }
  return {{"schema_version", 1},
          {"parameters", to_json(params)},
          {"direct", direct},
          {"indirect", indirect},
          {"retry_chains", chains},
          {"infrastructure", infra::to_json(r.graph)}};
}

std::set<Edge> edges_from_json(const json& doc) {
  std::set<Edge> out;
  if (const json* d = ju::find(doc, "direct")) {
    for (std::size_t k = 0; k < d->size(); ++k) {
      const std::string path = "direct[" + std::to_string(k) + "]";
      const auto& e = (*d)[k];
      const auto service = parse_service_key(ju::get<std::string>(e, "service", path));
      out.insert({ju::get<std::string>(e, "client", path), flows::to_string(service), "direct"});
    }
  }
  if (const json* d = ju::find(doc, "indirect")) {
    for (std::size_t k = 0; k < d->size(); ++k) {
      const std::string path = "indirect[" + std::to_string(k) + "]";
      const auto& e = (*d)[k];
      const auto up = channel_from(ju::require(e, "upstream", path), path + ".upstream");
      const auto down = channel_from(ju::require(e, "downstream", path), path + ".downstream");
      out.insert({flows::to_string(up), flows::to_string(down), "indirect"});
    }
  }
  if (const json* d = ju::find(doc, "retry_chains")) {
    for (std::size_t k = 0; k < d->size(); ++k) {
      const std::string path = "retry_chains[" + std::to_string(k) + "]";
      const auto& e = (*d)[k];
      const auto first = parse_service_key(ju::get<std::string>(e, "first_contact", path));
      const auto fallback = parse_service_key(ju::get<std::string>(e, "fallback", path));
      out.insert({ju::get<std::string>(e, "client", path) + "|" + flows::to_string(first), flows::to_string(fallback),
                  "retry"});
    }
  }
  return out;
}

}  // namespace mia::discovery
