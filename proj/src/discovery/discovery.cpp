#include "mia/discovery/discovery.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <optional>
#include <thread>
#include <tuple>

#include "mia/error.hpp"
#include "mia/numfmt.hpp"

namespace mia::discovery {

using flows::Channel;
using flows::ServiceKey;

std::vector<DirectDependency> direct_dependencies(const std::vector<flows::FlowRecord>& records, int limit) {
  std::map<Channel, DirectDependency> groups;
  for (const auto& r : records) {
    const auto a = flows::attribute(r, limit);
    auto [it, fresh] = groups.try_emplace(Channel{a.client, a.service});
    auto& d = it->second;
    if (fresh) {
      d.client = a.client;
      d.service = a.service;
      d.first_seen = d.last_seen = r.ts_us;
    }
    ++d.flow_count;
    d.first_seen = std::min(d.first_seen, r.ts_us);
    d.last_seen = std::max(d.last_seen, r.ts_us);
  }
  std::vector<DirectDependency> out;
  out.reserve(groups.size());
  for (auto& [k, d] : groups) out.push_back(std::move(d));
  return out;
}

std::vector<IndirectDependency> infer_indirect(const std::vector<DirectDependency>& direct,
                                               const SeriesProvider& series, const IndirectParams& params) {
  std::map<std::string, std::vector<const DirectDependency*>> by_client;
  for (const auto& d : direct) {
    if (d.flow_count >= params.min_activity) by_client[d.client].push_back(&d);
  }
  struct Candidate {
    const DirectDependency* up;
    const DirectDependency* down;
  };
  std::vector<Candidate> candidates;
  for (const auto& up : direct) {
    if (up.flow_count < params.min_activity) continue;
    auto it = by_client.find(up.service.host);
    if (it == by_client.end()) continue;
    for (const DirectDependency* down : it->second) {
      if (down->service == up.service) continue;
      candidates.push_back({&up, down});
    }
  }

  std::vector<std::optional<IndirectDependency>> scored(candidates.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < candidates.size(); i = next++) {
      const Channel up{candidates[i].up->client, candidates[i].up->service};
      const Channel down{candidates[i].down->client, candidates[i].down->service};
      const std::vector<double>* x = series(up);
      const std::vector<double>* y = series(down);
      if (!x || !y) continue;
      LagScore best;
      try {
        best = max_lag_ncc(*x, *y, params.max_lag);
      } catch (const Error& e) {
        if (e.code() == Errc::NoValidLag) continue;
        throw;
      }
      if (best.score >= params.threshold) {
        scored[i] = IndirectDependency{up, down, best.lag, best.lag * params.bin_width, best.score};
      }
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(params.threads, static_cast<unsigned>(candidates.size())));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
  }

  std::vector<IndirectDependency> out;
  for (auto& s : scored) {
    if (s) out.push_back(std::move(*s));
  }
  std::sort(out.begin(), out.end(), [](const IndirectDependency& a, const IndirectDependency& b) {
    return std::tie(a.downstream.client, a.upstream, a.downstream) <
           std::tie(b.downstream.client, b.upstream, b.downstream);
  });
  return out;
}

std::vector<RetryChain> detect_retry_chains(const std::vector<flows::FlowRecord>& records, const RetryParams& params,
                                            int limit) {
  struct Contact {
    std::int64_t ts;
    std::size_t order;
    ServiceKey service;
  };
  std::map<std::string, std::vector<Contact>> by_client;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto a = flows::attribute(records[i], limit);
    by_client[a.client].push_back({records[i].ts_us, i, a.service});
  }
  const auto gap_us = static_cast<std::int64_t>(std::llround(params.episode_gap * 1e6));

  std::vector<RetryChain> out;
  for (auto& [client, contacts] : by_client) {
    std::sort(contacts.begin(), contacts.end(),
              [](const Contact& a, const Contact& b) { return std::tie(a.ts, a.order) < std::tie(b.ts, b.order); });
    std::map<ServiceKey, std::size_t> first_counts;
    std::map<std::pair<ServiceKey, ServiceKey>, std::size_t> episodes;
    for (std::size_t i = 0; i < contacts.size(); ++i) {
      ++first_counts[contacts[i].service];
      std::set<ServiceKey> followers;
      for (std::size_t j = i + 1; j < contacts.size() && contacts[j].ts - contacts[i].ts <= gap_us; ++j) {
        if (contacts[j].service != contacts[i].service) followers.insert(contacts[j].service);
      }
      for (const auto& c : followers) ++episodes[{contacts[i].service, c}];
    }
    for (const auto& [pair, support] : episodes) {
      const double habitual = params.dominance * static_cast<double>(first_counts[pair.first]);
      if (support >= params.min_support && static_cast<double>(support) >= habitual) {
        out.push_back({client, pair.first, pair.second, support, params.episode_gap});
      }
    }
  }
  return out;
}

std::set<Edge> edges_of(const std::vector<DirectDependency>& direct) {
  std::set<Edge> out;
  for (const auto& d : direct) out.insert({d.client, flows::to_string(d.service), "direct"});
  return out;
}

std::set<Edge> edges_of(const std::vector<IndirectDependency>& indirect) {
  std::set<Edge> out;
  for (const auto& d : indirect) out.insert({flows::to_string(d.upstream), flows::to_string(d.downstream), "indirect"});
  return out;
}

std::set<Edge> edges_of(const std::vector<RetryChain>& chains) {
  std::set<Edge> out;
  for (const auto& c : chains) {
    out.insert({c.client + "|" + flows::to_string(c.first_contact), flows::to_string(c.fallback), "retry"});
  }
  return out;
}

EvaluationReport evaluate(const std::set<Edge>& discovered, const std::set<Edge>& truth) {
  EvaluationReport r;
  std::set_intersection(discovered.begin(), discovered.end(), truth.begin(), truth.end(),
                        std::back_inserter(r.true_positives));
  std::set_difference(discovered.begin(), discovered.end(), truth.begin(), truth.end(),
                      std::back_inserter(r.false_positives));
  std::set_difference(truth.begin(), truth.end(), discovered.begin(), discovered.end(),
                      std::back_inserter(r.false_negatives));
  const double tp = static_cast<double>(r.true_positives.size());
  const double fp = static_cast<double>(r.false_positives.size());
  const double fn = static_cast<double>(r.false_negatives.size());
  r.precision = tp + fp == 0.0 ? 1.0 : tp / (tp + fp);
  r.recall = tp + fn == 0.0 ? 1.0 : tp / (tp + fn);
  return r;
}

infra::GraphSpec export_graph(const std::vector<DirectDependency>& direct,
                              const std::vector<IndirectDependency>& indirect, const std::vector<RetryChain>& chains) {
  std::set<std::string> hosts;
  std::set<ServiceKey> services;
  for (const auto& d : direct) {
    hosts.insert(d.client);
    services.insert(d.service);
  }
  for (const auto& i : indirect) {
    // Service-level results carry no client.
    if (!i.upstream.client.empty()) hosts.insert(i.upstream.client);
    if (!i.downstream.client.empty()) hosts.insert(i.downstream.client);
    services.insert(i.upstream.service);
    services.insert(i.downstream.service);
  }
  for (const auto& c : chains) {
    hosts.insert(c.client);
    services.insert(c.first_contact);
    services.insert(c.fallback);
  }

  infra::GraphSpec g;
  for (const auto& h : hosts) g.assets.push_back({h, infra::AssetKind::Device, h, std::nullopt});
  for (const auto& s : services) {
    const std::string id = flows::to_string(s);
    g.assets.push_back({id, infra::AssetKind::Service, id, std::nullopt});
  }
  for (const auto& d : direct) {
    g.edges.push_back({d.client, flows::to_string(d.service), infra::EdgeKind::DiscoveredDirect, 1.0, {}});
  }
  std::map<std::pair<std::string, std::string>, double> indirect_edges;
  for (const auto& i : indirect) {
    auto key = std::make_pair(flows::to_string(i.upstream.service), flows::to_string(i.downstream.service));
    auto [it, fresh] = indirect_edges.try_emplace(key, i.score);
    if (!fresh) it->second = std::max(it->second, i.score);
  }
  for (const auto& [key, score] : indirect_edges) {
    g.edges.push_back({key.first, key.second, infra::EdgeKind::DiscoveredIndirect, std::clamp(score, 1e-6, 1.0), {}});
  }
  for (const auto& c : chains) {
    infra::Annotation a;
    a.kind = "retry_chain";
    a.asset = c.client;
    a.fields = {{"first_contact", flows::to_string(c.first_contact)},
                {"fallback", flows::to_string(c.fallback)},
                {"support", std::to_string(c.support)},
                {"episode_gap_s", format_number(c.episode_gap)}};
    a.needs_review = true;
    g.annotations.push_back(std::move(a));
  }
  return g;
}

DiscoveryResult discover(const std::vector<flows::FlowRecord>& records, const DiscoveryParams& params) {
  DiscoveryResult out;
  out.direct = direct_dependencies(records, params.registered_port_limit);
  out.retry_chains = detect_retry_chains(records, params.retry, params.registered_port_limit);
  if (!records.empty()) {
    const auto window = flows::span_of(records);
    const double w = params.indirect.bin_width;
    if (params.granularity == Granularity::Channel) {
      const auto series = flows::bin_all_channels(records, w, window, params.signal, params.registered_port_limit);
      out.indirect = infer_indirect(
          out.direct,
          [&](const Channel& c) -> const std::vector<double>* {
            auto it = series.find(c);
            return it == series.end() ? nullptr : &it->second.counts;
          },
          params.indirect);
    } else {
      const auto series = flows::bin_all_services(records, w, window, params.signal, params.registered_port_limit);
      out.indirect = infer_indirect(
          out.direct,
          [&](const Channel& c) -> const std::vector<double>* {
            auto it = series.find(c.service);
            return it == series.end() ? nullptr : &it->second.counts;
          },
          params.indirect);
      // Channels of one service share a series; keep one edge per service pair.
      std::vector<IndirectDependency> merged;
      std::set<std::pair<ServiceKey, ServiceKey>> seen;
      for (auto d : out.indirect) {
        if (!seen.insert({d.upstream.service, d.downstream.service}).second) continue;
        d.upstream.client.clear();
        d.downstream.client.clear();
        merged.push_back(std::move(d));
      }
      out.indirect = std::move(merged);
    }
  }
  out.graph = export_graph(out.direct, out.indirect, out.retry_chains);
  return out;
}

flows::ServiceKey parse_service_key(const std::string& text) {
  const auto colon = text.rfind(':');
  const auto slash = text.rfind('/');
  if (colon == std::string::npos || slash == std::string::npos || slash < colon || colon == 0) {
    throw Error(Errc::ValidationError, "service '" + text + "' is not host:port/proto");
  }
  ServiceKey key;
  key.host = text.substr(0, colon);
  const std::string port = text.substr(colon + 1, slash - colon - 1);
  const std::string proto = text.substr(slash + 1);
  try {
    std::size_t used = 0;
    key.port = std::stoi(port, &used);
    if (used != port.size() || key.port < 0 || key.port > 65535) throw std::out_of_range("port");
  } catch (const std::logic_error&) {
    throw Error(Errc::ValidationError, "service '" + text + "' has a bad port");
  }
  if (proto == "tcp") {
    key.proto = flows::Proto::Tcp;
  } else if (proto == "udp") {
    key.proto = flows::Proto::Udp;
  } else {
    throw Error(Errc::ValidationError, "service '" + text + "' has a bad protocol");
  }
  return key;
}

}  // namespace mia::discovery
