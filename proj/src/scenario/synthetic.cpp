#include "mia/scenario/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "mia/json_util.hpp"
#include "mia/sim/rng.hpp"

namespace mia::scenario {

using nlohmann::json;
using namespace json_util;

namespace {

SynthChannel channel_from(const json& j, const std::string& path, bool with_rate) {
  SynthChannel c;
  c.client = get<std::string>(j, "client", path);
  c.service = get<std::string>(j, "service", path);
  if (with_rate) {
    c.rate_per_s = get<double>(j, "rate_per_s", path);
    if (!(c.rate_per_s >= 0.0)) invalid(path + ".rate_per_s", "must be non-negative");
  }
  return c;
}

const json& array_or_empty(const json& doc, const char* key) {
  static const json empty = json::array();
  const json* v = find(doc, key);
  if (v && !v->is_array()) invalid(key, "expected an array");
  return v ? *v : empty;
}

struct Generated {
  std::int64_t offset_us;
  std::size_t order;
  std::string client;
  std::string service;
};

}  // namespace

SyntheticTopology topology_from_json(const json& doc) {
  if (!doc.is_object()) invalid("<root>", "expected an object");
  SyntheticTopology t;
  t.start_us = get_or<std::int64_t>(doc, "start_us", "<root>", t.start_us);
  std::set<std::string> ids;
  const json& services = array_or_empty(doc, "services");
  for (std::size_t i = 0; i < services.size(); ++i) {
    const std::string p = "services[" + std::to_string(i) + "]";
    SynthService s;
    s.id = get<std::string>(services[i], "id", p);
    s.key.host = get<std::string>(services[i], "host", p);
    s.key.port = get<int>(services[i], "port", p);
    if (s.key.port < 0 || s.key.port > flows::kRegisteredPortLimit) {
      invalid(p + ".port", "service ports must be registered ports (<= 49151)");
    }
    const auto proto = get_or<std::string>(services[i], "proto", p, "tcp");
    if (proto != "tcp" && proto != "udp") invalid(p + ".proto", "must be tcp or udp");
    s.key.proto = proto == "tcp" ? flows::Proto::Tcp : flows::Proto::Udp;
    if (!ids.insert(s.id).second) invalid(p + ".id", "duplicate service '" + s.id + "'");
    t.services.push_back(std::move(s));
  }
  auto known = [&](const std::string& id, const std::string& path) {
    if (!ids.count(id)) invalid(path, "unknown service '" + id + "'");
  };
  const json& channels = array_or_empty(doc, "channels");
  for (std::size_t i = 0; i < channels.size(); ++i) {
    const std::string p = "channels[" + std::to_string(i) + "]";
    t.channels.push_back(channel_from(channels[i], p, true));
    known(t.channels.back().service, p + ".service");
  }
  const json& cascades = array_or_empty(doc, "cascades");
  for (std::size_t i = 0; i < cascades.size(); ++i) {
    const std::string p = "cascades[" + std::to_string(i) + "]";
    SynthCascade c;
    c.upstream = channel_from(require(cascades[i], "upstream", p), p + ".upstream", false);
    known(c.upstream.service, p + ".upstream.service");
    c.downstream_service = get<std::string>(cascades[i], "downstream_service", p);
    known(c.downstream_service, p + ".downstream_service");
    c.lag_s = get_or<double>(cascades[i], "lag_s", p, c.lag_s);
    c.prob = get_or<double>(cascades[i], "prob", p, c.prob);
    if (!(c.lag_s >= 0.0)) invalid(p + ".lag_s", "must be non-negative");
    if (!(c.prob >= 0.0 && c.prob <= 1.0)) invalid(p + ".prob", "must be in [0, 1]");
    t.cascades.push_back(std::move(c));
  }
  const json& retries = array_or_empty(doc, "retry_chains");
  for (std::size_t i = 0; i < retries.size(); ++i) {
    const std::string p = "retry_chains[" + std::to_string(i) + "]";
    SynthRetry r;
    r.client = get<std::string>(retries[i], "client", p);
    r.first = get<std::string>(retries[i], "first", p);
    r.fallback = get<std::string>(retries[i], "fallback", p);
    known(r.first, p + ".first");
    known(r.fallback, p + ".fallback");
    if (r.first == r.fallback) invalid(p + ".fallback", "must differ from first");
    r.rate_per_s = get<double>(retries[i], "rate_per_s", p);
    r.gap_s = get_or<double>(retries[i], "gap_s", p, r.gap_s);
    if (!(r.rate_per_s >= 0.0)) invalid(p + ".rate_per_s", "must be non-negative");
    if (!(r.gap_s > 0.0)) invalid(p + ".gap_s", "must be positive");
    t.retry_chains.push_back(std::move(r));
  }
  if (const json* n = find(doc, "noise")) {
    t.noise.perturb_fraction = get_or<double>(*n, "perturb_fraction", "noise", 0.0);
    t.noise.jitter_s = get_or<double>(*n, "jitter_s", "noise", 1.0);
    if (!(t.noise.perturb_fraction >= 0.0 && t.noise.perturb_fraction <= 1.0)) {
      invalid("noise.perturb_fraction", "must be in [0, 1]");
    }
  }
  return t;
}

GeneratedFlows generate_flows(const SyntheticTopology& topo, double duration_s, std::uint64_t seed) {
  if (!(duration_s > 0.0)) invalid("duration", "must be positive");
  sim::RngStream rng(seed, sim::StreamId::Generator);
  std::map<std::string, const SynthService*> by_id;
  for (const auto& s : topo.services) by_id[s.id] = &s;
  const auto duration_us = static_cast<std::int64_t>(std::llround(duration_s * 1e6));
  auto to_us = [](double s) { return static_cast<std::int64_t>(std::llround(s * 1e6)); };

  std::vector<Generated> gen;
  auto emit = [&](std::int64_t offset, const std::string& client, const std::string& service) {
    if (offset < 0 || offset >= duration_us) return false;
    gen.push_back({offset, gen.size(), client, service});
    return true;
  };
  auto poisson = [&](double rate, auto&& on_arrival) {
    if (rate <= 0.0) return;
    double t = 0.0;
    while (true) {
      t += -std::log1p(-rng.uniform()) / rate;
      if (t >= duration_s) return;
      on_arrival(to_us(t));
    }
  };

  for (const auto& c : topo.channels) {
    poisson(c.rate_per_s, [&](std::int64_t at) { emit(at, c.client, c.service); });
  }
  json truth_retry = json::array();
  for (const auto& r : topo.retry_chains) {
    std::size_t episodes = 0;
    poisson(r.rate_per_s, [&](std::int64_t at) {
      if (emit(at, r.client, r.first)) {
        emit(at + to_us(r.gap_s), r.client, r.fallback);
        ++episodes;
      }
    });
    if (episodes > 0) {
      truth_retry.push_back({{"client", r.client},
                             {"first_contact", flows::to_string(by_id.at(r.first)->key)},
                             {"fallback", flows::to_string(by_id.at(r.fallback)->key)},
                             {"episodes", episodes}});
    }
  }

  json truth_indirect = json::array();
  for (const auto& cascade : topo.cascades) {
    const std::string pivot = by_id.at(cascade.upstream.service)->key.host;
    std::vector<std::int64_t> triggers;
    for (const auto& g : gen) {
      if (g.client == cascade.upstream.client && g.service == cascade.upstream.service) triggers.push_back(g.offset_us);
    }
    std::sort(triggers.begin(), triggers.end());
    for (std::int64_t at : triggers) {
      const bool fire = rng.uniform() < cascade.prob;
      const bool perturb = rng.uniform() < topo.noise.perturb_fraction;
      const double how = rng.uniform();
      if (!fire) continue;
      std::int64_t response = at + to_us(cascade.lag_s);
      if (perturb) {
        if (how < 0.5) continue;
        response += (how < 0.75 ? -1 : 1) * to_us(topo.noise.jitter_s);
      }
      emit(response, pivot, cascade.downstream_service);
    }
    if (!triggers.empty() && cascade.prob > 0.0) {
      truth_indirect.push_back(
          {{"upstream", {{"client", cascade.upstream.client},
                         {"service", flows::to_string(by_id.at(cascade.upstream.service)->key)}}},
           {"downstream", {{"client", pivot}, {"service", flows::to_string(by_id.at(cascade.downstream_service)->key)}}},
           {"lag_s", cascade.lag_s}});
    }
  }
  std::stable_sort(gen.begin(), gen.end(), [](const Generated& a, const Generated& b) {
    return a.offset_us != b.offset_us ? a.offset_us < b.offset_us : a.order < b.order;
  });
  GeneratedFlows out;
  std::set<std::pair<std::string, std::string>> channels;
  for (const auto& g : gen) {
    const SynthService& s = *by_id.at(g.service);
    flows::FlowRecord r;
    r.ts_us = topo.start_us + g.offset_us;
    r.src_host = g.client;
    r.src_port = 49152 + static_cast<int>(rng.below(16384));
    r.dst_host = s.key.host;
    r.dst_port = s.key.port;
    r.proto = s.key.proto;
    r.bytes = 64 + rng.below(4000);
    r.packets = 1 + rng.below(10);
    out.records.push_back(std::move(r));
    channels.insert({g.client, flows::to_string(s.key)});
  }
  json truth_direct = json::array();
  for (const auto& [client, service] : channels) truth_direct.push_back({{"client", client}, {"service", service}});
  out.truth = {{"schema_version", 1},
               {"seed", seed},
               {"duration_s", duration_s},
               {"direct", truth_direct},
               {"indirect", truth_indirect},
               {"retry_chains", truth_retry}};
  return out;
}

}  // namespace mia::scenario
