#include "mia/scenario/scenario.hpp"

#include <fstream>
#include <sstream>

#include "mia/infra/graph_json.hpp"
#include "mia/json_util.hpp"
#include "mia/scenario/units.hpp"

namespace mia::scenario {

using nlohmann::json;
using namespace json_util;

namespace {

std::vector<std::string> string_list(const json& obj, const char* key, const std::string& path) {
  const json* list = find(obj, key);
  if (!list) return {};
  if (!list->is_array()) invalid(path + "." + key, "expected an array");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < list->size(); ++i) {
    out.push_back(as<std::string>((*list)[i], path + "." + key + "[" + std::to_string(i) + "]"));
  }
  return out;
}

double probability(const json& obj, const char* key, const std::string& path, double fallback) {
  const double p = get_or<double>(obj, key, path, fallback);
  if (!(p >= 0.0 && p <= 1.0)) invalid(path + "." + key, "must be in [0, 1]");
  return p;
}

sim::Distribution dist_or(const json& obj, const char* key, const std::string& path, sim::Distribution fallback) {
  const json* v = find(obj, key);
  return v ? distribution_from_json(*v, path + "." + key) : fallback;
}

threat::AttackerSpec attacker_from_json(const json& doc, const std::string& path) {
  if (!doc.is_object()) invalid(path, "expected an object");
  threat::AttackerSpec a;
  a.spearphish_success_prob = probability(doc, "spearphish_success_prob", path, a.spearphish_success_prob);
  a.spearphish_interval = dist_or(doc, "spearphish_interval", path, a.spearphish_interval);
  a.scan_interval = dist_or(doc, "scan_interval", path, a.scan_interval);
  for (auto& c : string_list(doc, "capabilities", path)) a.capabilities.insert(std::move(c));
  a.target = get<std::string>(doc, "target", path);
  a.proficiency = probability(doc, "proficiency", path, a.proficiency);
  a.agility = get_or<double>(doc, "agility", path, a.agility);
  if (!(a.agility > 0.0 && a.agility <= 1.0)) invalid(path + ".agility", "must be in (0, 1]");

  const json& effect = require(doc, "effect", path);
  const std::string ep = path + ".effect";
  const auto type = get<std::string>(effect, "type", ep);
  if (type == "stop") {
    a.effect = {threat::EffectKind::Stop, 0.0};
  } else if (type == "degrade") {
    a.effect = {threat::EffectKind::Degrade, get<double>(effect, "factor", ep)};
    if (!(a.effect.factor > 0.0 && a.effect.factor < 1.0)) invalid(ep + ".factor", "must be in (0, 1)");
  } else if (type == "integrity") {
    a.effect = {threat::EffectKind::Integrity, 0.0};
  } else if (type == "confidentiality") {
    a.effect = {threat::EffectKind::Confidentiality, 0.0};
  } else {
    invalid(ep + ".type", "unknown effect '" + type + "'");
  }

  const std::string sp = path + ".start";
  const json* start = find(doc, "start");
  if (!start) return a;
  const auto policy = get<std::string>(*start, "policy", sp);
  if (policy == "fixed") {
    a.start.kind = threat::StartKind::Fixed;
    a.start.at = duration_from_json(require(*start, "at", sp), sp + ".at");
  } else if (policy == "random") {
    a.start.kind = threat::StartKind::Random;
    const json& window = require(*start, "window", sp);
    if (!window.is_array() || window.size() != 2) invalid(sp + ".window", "expected [begin, end]");
    a.start.window_begin = duration_from_json(window[0], sp + ".window[0]");
    a.start.window_end = duration_from_json(window[1], sp + ".window[1]");
    if (!(a.start.window_begin >= 0.0 && a.start.window_begin < a.start.window_end)) {
      invalid(sp + ".window", "must satisfy 0 <= begin < end");
    }
  } else if (policy == "process_triggered") {
    a.start.kind = threat::StartKind::ProcessTriggered;
    a.start.task = get<std::string>(*start, "task", sp);
    if (const json* v = find(*start, "after_time_of_day")) {
      a.start.after_time_of_day = duration_from_json(*v, sp + ".after_time_of_day");
    }
    a.start.day = get_or<int>(*start, "day", sp, 0);
  } else {
    invalid(sp + ".policy", "unknown start policy '" + policy + "'");
  }
  return a;
}

json to_json(const threat::AttackerSpec& a) {
  json effect{{"type", threat::to_string(a.effect.kind)}};
  if (a.effect.kind == threat::EffectKind::Degrade) effect["factor"] = a.effect.factor;
  json start;
  switch (a.start.kind) {
    case threat::StartKind::Fixed: start = {{"policy", "fixed"}, {"at", a.start.at}}; break;
    case threat::StartKind::Random:
      start = {{"policy", "random"}, {"window", {a.start.window_begin, a.start.window_end}}};
      break;
    case threat::StartKind::ProcessTriggered:
      start = {{"policy", "process_triggered"},
               {"task", a.start.task},
               {"after_time_of_day", a.start.after_time_of_day},
               {"day", a.start.day}};
      break;
  }
  return {{"spearphish_success_prob", a.spearphish_success_prob},
          {"spearphish_interval", scenario::to_json(a.spearphish_interval)},
          {"scan_interval", scenario::to_json(a.scan_interval)},
          {"capabilities", a.capabilities},
          {"target", a.target},
          {"effect", effect},
          {"start", start},
          {"proficiency", a.proficiency},
          {"agility", a.agility}};
}

threat::DefenderSpec defender_from_json(const json& doc, const std::string& path) {
  if (!doc.is_object()) invalid(path, "expected an object or null");
  threat::DefenderSpec d;
  d.detect_delay = dist_or(doc, "detect_delay", path, d.detect_delay);
  d.forensics_duration = dist_or(doc, "forensics_duration", path, d.forensics_duration);
  d.per_host_discovery_prob = probability(doc, "per_host_discovery_prob", path, d.per_host_discovery_prob);
  d.remediation_per_host = dist_or(doc, "remediation_per_host", path, d.remediation_per_host);
  return d;
}

json to_json(const threat::DefenderSpec& d) {
  return {{"detect_delay", scenario::to_json(d.detect_delay)},
          {"forensics_duration", scenario::to_json(d.forensics_duration)},
          {"per_host_discovery_prob", d.per_host_discovery_prob},
          {"remediation_per_host", scenario::to_json(d.remediation_per_host)}};
}

// Runs a domain check and reports its failure as a validation error on `field`.
template <class Fn>
auto checked(const std::string& field, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.code() == Errc::ValidationError) throw;
    invalid(field, e.what());
  }
}

}  // namespace

mission::MissionSpec mission_from_json(const json& doc, const std::string& path) {
  if (!doc.is_object()) invalid(path, "expected an object");
  mission::MissionSpec m;
  if (const json* v = find(doc, "day_length")) m.day_length = duration_from_json(*v, path + ".day_length");
  if (const json* v = find(doc, "horizon")) m.horizon = duration_from_json(*v, path + ".horizon");
  m.arrivals = dist_or(doc, "arrivals", path, m.arrivals);
  if (const json* v = find(doc, "arrival_end")) m.arrival_end = duration_from_json(*v, path + ".arrival_end");
  if (const json* v = find(doc, "deadline_per_item")) {
    m.deadline_per_item = duration_from_json(*v, path + ".deadline_per_item");
  }
  if (const json* cps = find(doc, "checkpoints")) {
    if (!cps->is_array()) invalid(path + ".checkpoints", "expected an array");
    for (std::size_t i = 0; i < cps->size(); ++i) {
      m.checkpoints.push_back(duration_from_json((*cps)[i], path + ".checkpoints[" + std::to_string(i) + "]"));
    }
  }
  const json& personnel = require(doc, "personnel", path);
  if (!personnel.is_object()) invalid(path + ".personnel", "expected an object of role: headcount");
  for (auto it = personnel.begin(); it != personnel.end(); ++it) {
    m.personnel[it.key()] = as<int>(*it, path + ".personnel." + it.key());
  }
  const json& tasks = require(doc, "tasks", path);
  if (!tasks.is_array()) invalid(path + ".tasks", "expected an array");
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const std::string p = path + ".tasks[" + std::to_string(i) + "]";
    const json& t = tasks[i];
    mission::TaskSpec task;
    task.id = get<std::string>(t, "id", p);
    task.role = get<std::string>(t, "role", p);
    task.duration = distribution_from_json(require(t, "duration", p), p + ".duration");
    task.rework_duration = dist_or(t, "rework_duration", p, task.duration);
    task.required_assets = string_list(t, "required_assets", p);
    task.predecessors = string_list(t, "predecessors", p);
    m.tasks.push_back(std::move(task));
  }
  return m;
}

json to_json(const mission::MissionSpec& m) {
  json tasks = json::array();
  for (const auto& t : m.tasks) {
    tasks.push_back({{"id", t.id},
                     {"role", t.role},
                     {"duration", to_json(t.duration)},
                     {"rework_duration", to_json(t.rework_duration)},
                     {"required_assets", t.required_assets},
                     {"predecessors", t.predecessors}});
  }
  json out{{"day_length", m.day_length},
           {"horizon", m.horizon},
           {"arrivals", to_json(m.arrivals)},
           {"checkpoints", m.checkpoints},
           {"personnel", m.personnel},
           {"tasks", tasks}};
  out["arrival_end"] = m.arrival_end ? json(*m.arrival_end) : json(nullptr);
  out["deadline_per_item"] = m.deadline_per_item ? json(*m.deadline_per_item) : json(nullptr);
  return out;
}

void validate(const Scenario& s) {
  if (s.sim.replications < 1) invalid("sim.replications", "must be at least 1");
  if (!(s.sim.horizon > 0.0)) invalid("sim.horizon", "must be positive");
  const auto graph = checked("infrastructure", [&] { return infra::build_graph(s.infrastructure); });
  const auto mission = checked("mission", [&] { return mission::validate_mission(s.mission, &graph); });
  if (s.attacker) {
    checked("attacker", [&] {
      threat::validate(*s.attacker, graph);
      return 0;
    });
    if (s.attacker->start.kind == threat::StartKind::ProcessTriggered) {
      checked("attacker.start.task", [&] { return mission.task_index(s.attacker->start.task); });
    }
  }
  if (s.defender) {
    checked("defender", [&] {
      threat::validate(*s.defender);
      return 0;
    });
  }
}

Scenario scenario_from_json(const json& doc) {
  if (!doc.is_object()) invalid("<root>", "expected an object");
  const int version = get_or<int>(doc, "schema_version", "<root>", kSchemaVersion);
  if (version < 1 || version > kSchemaVersion) {
    invalid("schema_version", "unsupported version " + std::to_string(version));
  }
  Scenario s;
  s.name = get_or<std::string>(doc, "name", "<root>", "");
  if (const json* sim = find(doc, "sim")) {
    const long long reps = get_or<long long>(*sim, "replications", "sim", 10);
    if (reps < 1) invalid("sim.replications", "must be at least 1");
    s.sim.replications = static_cast<std::size_t>(reps);
    s.sim.base_seed = get_or<std::uint64_t>(*sim, "base_seed", "sim", s.sim.base_seed);
    if (const json* h = find(*sim, "horizon")) s.sim.horizon = duration_from_json(*h, "sim.horizon");
    s.sim.threads = get_or<unsigned>(*sim, "threads", "sim", 1u);
  }
  s.infrastructure = infra::graph_spec_from_json(require(doc, "infrastructure", "<root>"));
  s.mission = mission_from_json(require(doc, "mission", "<root>"));
  s.mission.horizon = s.sim.horizon;
  if (const json* a = find(doc, "attacker")) {
    s.attacker = attacker_from_json(*a, "attacker");
    if (!doc.contains("defender")) {
      invalid("defender", "required when an attacker is present (use null for no defender)");
    }
  }
  if (const json* d = find(doc, "defender")) s.defender = defender_from_json(*d, "defender");
  validate(s);
  return s;
}

json to_json(const Scenario& s) {
  json out{{"schema_version", kSchemaVersion},
           {"name", s.name},
           {"sim",
            {{"replications", s.sim.replications},
             {"base_seed", s.sim.base_seed},
             {"horizon", s.sim.horizon},
             {"threads", s.sim.threads}}},
           {"infrastructure", infra::to_json(s.infrastructure)},
           {"mission", to_json(s.mission)}};
  out["mission"].erase("horizon");
  if (s.attacker) {
    out["attacker"] = to_json(*s.attacker);
    out["defender"] = s.defender ? to_json(*s.defender) : json(nullptr);
  } else if (s.defender) {
    out["defender"] = to_json(*s.defender);
  }
  return out;
}

static json parse_located(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(Errc::ParseError, origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + e.what());
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  return parse_located(text, path);
}

Scenario parse_scenario(const std::string& text, const std::string& origin) {
  return scenario_from_json(parse_located(text, origin));
}

Scenario load_scenario(const std::string& path) { return scenario_from_json(read_json_file(path)); }

void save_scenario(const Scenario& scenario, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::Io, "cannot write '" + path + "'");
  out << to_json(scenario).dump(2) << '\n';
}

}  // namespace mia::scenario
