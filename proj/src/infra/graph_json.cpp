#include "mia/infra/graph_json.hpp"

#include "mia/json_util.hpp"

namespace mia::infra {

using nlohmann::json;
using namespace json_util;

GraphSpec graph_spec_from_json(const json& doc, const std::string& path) {
  if (!doc.is_object()) invalid(path, "expected an object");
  GraphSpec spec;
  if (const json* assets = find(doc, "assets")) {
    for (std::size_t i = 0; i < assets->size(); ++i) {
      const std::string p = path + ".assets[" + std::to_string(i) + "]";
      const json& a = (*assets)[i];
      Asset asset;
      asset.id = get<std::string>(a, "id", p);
      const auto kind_name = get_or<std::string>(a, "kind", p, "device");
      auto kind = asset_kind_from(kind_name);
      if (!kind) invalid(p + ".kind", "unknown asset kind '" + kind_name + "'");
      asset.kind = *kind;
      asset.name = get_or<std::string>(a, "name", p, asset.id);
      if (const json* s = find(a, "subnet")) asset.subnet = as<std::string>(*s, p + ".subnet");
      spec.assets.push_back(std::move(asset));
    }
  }
  if (const json* edges = find(doc, "edges")) {
    for (std::size_t i = 0; i < edges->size(); ++i) {
      const std::string p = path + ".edges[" + std::to_string(i) + "]";
      const json& e = (*edges)[i];
      DependencyEdge edge;
      edge.from = get<std::string>(e, "from", p);
      edge.to = get<std::string>(e, "to", p);
      const auto kind_name = get_or<std::string>(e, "kind", p, "declared");
      auto kind = edge_kind_from(kind_name);
      if (!kind) invalid(p + ".kind", "unknown edge kind '" + kind_name + "'");
      edge.kind = *kind;
      edge.weight = get_or<double>(e, "weight", p, 1.0);
      edge.any_of_group = get_or<std::string>(e, "any_of", p, "");
      spec.edges.push_back(std::move(edge));
    }
  }
  if (const json* vulns = find(doc, "vulnerabilities")) {
    for (std::size_t i = 0; i < vulns->size(); ++i) {
      const std::string p = path + ".vulnerabilities[" + std::to_string(i) + "]";
      spec.vulnerabilities.push_back(
          {get<std::string>((*vulns)[i], "asset", p), get<std::string>((*vulns)[i], "exploit_id", p)});
    }
  }
  if (const json* anns = find(doc, "annotations")) {
    for (std::size_t i = 0; i < anns->size(); ++i) {
      const std::string p = path + ".annotations[" + std::to_string(i) + "]";
      const json& a = (*anns)[i];
      Annotation ann;
      ann.kind = get<std::string>(a, "kind", p);
      ann.asset = get_or<std::string>(a, "asset", p, "");
      ann.needs_review = get_or<bool>(a, "needs_review", p, false);
      if (const json* fields = find(a, "fields")) {
        for (auto it = fields->begin(); it != fields->end(); ++it) {
          ann.fields[it.key()] = it->is_string() ? it->get<std::string>() : it->dump();
        }
      }
      spec.annotations.push_back(std::move(ann));
    }
  }
  return spec;
}

json to_json(const GraphSpec& spec) {
  json doc = json::object();
  doc["assets"] = json::array();
  for (const auto& a : spec.assets) {
    json j{{"id", a.id}, {"kind", to_string(a.kind)}, {"name", a.name}};
    if (a.subnet) j["subnet"] = *a.subnet;
    doc["assets"].push_back(std::move(j));
  }
  doc["edges"] = json::array();
  for (const auto& e : spec.edges) {
    json j{{"from", e.from}, {"to", e.to}, {"kind", to_string(e.kind)}, {"weight", e.weight}};
    if (!e.any_of_group.empty()) j["any_of"] = e.any_of_group;
    doc["edges"].push_back(std::move(j));
  }
  doc["vulnerabilities"] = json::array();
  for (const auto& v : spec.vulnerabilities) {
    doc["vulnerabilities"].push_back({{"asset", v.asset}, {"exploit_id", v.exploit_id}});
  }
  if (!spec.annotations.empty()) {
    doc["annotations"] = json::array();
    for (const auto& a : spec.annotations) {
      doc["annotations"].push_back(
          {{"kind", a.kind}, {"asset", a.asset}, {"fields", a.fields}, {"needs_review", a.needs_review}});
    }
  }
  return doc;
}

json to_json(const StaticImpactReport& report) {
  json tasks = json::array();
  for (const auto& t : report.tasks) {
    tasks.push_back({{"task", t.task}, {"status", t.impacted ? "impacted" : "clear"}, {"chain", t.chain}});
  }
  return json{{"tasks", tasks}};
}

}  // namespace mia::infra
