#include <fstream>
#include <sstream>

#include "mia/cli/cli.hpp"
#include "mia/discovery/discovery_json.hpp"
#include "mia/error.hpp"
#include "mia/flows/flows.hpp"
#include "mia/infra/graph_json.hpp"
#include "mia/metrics/metrics_io.hpp"
#include "mia/scenario/runner.hpp"
#include "mia/scenario/scenario.hpp"
#include "mia/scenario/synthetic.hpp"

namespace mia::cli {

using nlohmann::json;

namespace {

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open '" + path + "'");
  return in;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::Io, "cannot write '" + path + "'");
  out << content;
  if (!out) throw Error(Errc::Io, "failed writing '" + path + "'");
}

void emit(const std::string& path, const json& doc, std::ostream& out) {
  const std::string text = doc.dump(2) + "\n";
  if (path.empty()) {
    out << text;
  } else {
    write_file(path, text);
  }
}

std::string metrics_csv(const std::vector<metrics::MissionMetrics>& runs) {
  std::ostringstream s;
  metrics::write_csv(s, runs);
  return s.str();
}

std::vector<metrics::MissionMetrics> read_metrics(const std::string& path) {
  auto in = open_input(path);
  return metrics::read_csv(in);
}

}  // namespace

int cmd_discover(const DiscoverOptions& o, std::ostream& out) {
  auto in = open_input(o.flows);
  const auto parsed = flows::parse_flows(in, !o.lenient);
  const auto result = discovery::discover(parsed.records, o.params);
  json doc = discovery::to_json(result, o.params);
  doc["metadata"] = {{"command", "discover"},
                     {"flows", o.flows},
                     {"records", parsed.records.size()},
                     {"skipped_lines", parsed.skipped},
                     {"strict", !o.lenient}};
  emit(o.out, doc, out);
  return kExitOk;
}

int cmd_simulate(const SimulateOptions& o, std::ostream& out) {
  const auto sc = scenario::load_scenario(o.scenario);
  const auto prepared = scenario::prepare(sc);
  const std::size_t n = o.replications.value_or(sc.sim.replications);
  const std::uint64_t seed = o.seed.value_or(sc.sim.base_seed);
  const unsigned threads = o.threads.value_or(sc.sim.threads);

  const auto runs = scenario::run_batch(prepared, n, seed, true, threads);
  write_file(o.out, metrics_csv(runs));
  const auto summary = metrics::aggregate(runs);

  json doc{{"metadata",
            {{"command", "simulate"},
             {"scenario", o.scenario},
             {"replications", n},
             {"base_seed", seed},
             {"threads", threads},
             {"horizon_s", sc.sim.horizon},
             {"attacker", sc.attacker.has_value()},
             {"defender", sc.defender.has_value()},
             {"metrics_csv", o.out}}},
           {"summary", metrics::to_json(summary)}};
  if (o.baseline) {
    const auto base_runs = scenario::run_batch(prepared, n, seed, false, threads);
    if (!o.baseline_out.empty()) write_file(o.baseline_out, metrics_csv(base_runs));
    const auto base_summary = metrics::aggregate(base_runs);
    doc["baseline"] = metrics::to_json(base_summary);
    doc["comparison"] = metrics::to_json(metrics::compare(summary, base_summary, o.threshold));
  }
  emit(o.summary, doc, out);
  return kExitOk;
}

int cmd_propagate(const PropagateOptions& o, std::ostream& out) {
  const json graph_doc = scenario::read_json_file(o.graph);
  const json* infra_doc = graph_doc.contains("infrastructure") ? &graph_doc["infrastructure"] : &graph_doc;
  const auto graph = infra::build_graph(infra::graph_spec_from_json(*infra_doc));

  const json mission_doc = o.mission.empty() ? graph_doc : scenario::read_json_file(o.mission);
  if (!mission_doc.contains("mission") && !mission_doc.contains("tasks")) {
    throw Error(Errc::ValidationError, "mission: no mission document given (use --mission)");
  }
  const auto mission =
      scenario::mission_from_json(mission_doc.contains("mission") ? mission_doc["mission"] : mission_doc);
  infra::MissionBindings bindings;
  for (const auto& t : mission.tasks) bindings[t.id] = t.required_assets;

  const std::set<std::string> compromised(o.compromised.begin(), o.compromised.end());
  const auto report = infra::propagate_static_impact(graph, compromised, bindings);
  json doc = infra::to_json(report);
  doc["metadata"] = {{"command", "propagate"},
                     {"graph", o.graph},
                     {"mission", o.mission.empty() ? o.graph : o.mission},
                     {"compromised", compromised}};
  emit(o.out, doc, out);
  return kExitOk;
}

int cmd_gen_flows(const GenFlowsOptions& o, std::ostream& out) {
  const auto topology = scenario::topology_from_json(scenario::read_json_file(o.topology));
  auto generated = scenario::generate_flows(topology, o.duration, o.seed);
  std::ostringstream csv;
  flows::write_flows(csv, generated.records);
  write_file(o.out, csv.str());
  generated.truth["metadata"] = {{"command", "gen-flows"}, {"topology", o.topology}, {"flows", o.out}};
  write_file(o.truth, generated.truth.dump(2) + "\n");
  json doc{{"records", generated.records.size()},
           {"seed", o.seed},
           {"duration_s", o.duration},
           {"flows", o.out},
           {"truth", o.truth}};
  out << doc.dump(2) << '\n';
  return kExitOk;
}

int cmd_report(const ReportOptions& o, std::ostream& out) {
  const auto summary = metrics::aggregate(read_metrics(o.metrics));
  json doc{{"metadata", {{"command", "report"}, {"metrics", o.metrics}, {"threshold", o.threshold}}},
           {"summary", metrics::to_json(summary)}};
  if (!o.baseline.empty()) {
    const auto base = metrics::aggregate(read_metrics(o.baseline));
    doc["metadata"]["baseline"] = o.baseline;
    doc["baseline"] = metrics::to_json(base);
    doc["comparison"] = metrics::to_json(metrics::compare(summary, base, o.threshold));
  }
  out << doc.dump(2) << '\n';
  return kExitOk;
}

}  // namespace mia::cli
