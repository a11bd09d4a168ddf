#include <sstream>
#include <string>

#include "mia/error.hpp"
#include "mia/metrics/metrics_io.hpp"
#include "mia/numfmt.hpp"

namespace mia::metrics {

void write_csv(std::ostream& out, const std::vector<MissionMetrics>& runs) {
  out << kCsvHeader << '\n';
  for (std::size_t k = 0; k < runs.size(); ++k) {
    const auto& m = runs[k];
    out << k << ',' << m.plans_completed << ',' << m.plans_corrupted_undetected << ','
        << format_number(m.corrupted_fraction) << ',' << format_number(m.mean_completion_delay) << ','
        << format_number(m.blocked_seconds) << ',' << format_number(m.attack_duration) << ','
        << format_number(m.confidentiality_exposure) << '\n';
  }
}

std::vector<MissionMetrics> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(Errc::ParseError, "line 1: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw Error(Errc::ParseError, "line 1: unexpected metrics header");
  std::vector<MissionMetrics> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 8) {
      throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": expected 8 fields");
    }
    try {
      MissionMetrics m;
      m.plans_completed = std::stoull(cells[1]);
      m.plans_corrupted_undetected = std::stoull(cells[2]);
      m.corrupted_fraction = std::stod(cells[3]);
      m.mean_completion_delay = std::stod(cells[4]);
      m.blocked_seconds = std::stod(cells[5]);
      m.attack_duration = std::stod(cells[6]);
      m.confidentiality_exposure = std::stod(cells[7]);
      out.push_back(m);
    } catch (const std::logic_error&) {
      throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": bad number");
    }
  }
  return out;
}

nlohmann::json to_json(const Statistic& s) {
  nlohmann::json j{{"mean", s.mean}, {"stdev", s.stdev}, {"min", s.min}, {"max", s.max}, {"n", s.n}};
  j["ci95_half_width"] = s.ci_half_width ? nlohmann::json(*s.ci_half_width) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json to_json(const ReplicationSummary& s) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [name, stat] : s.metrics) j[name] = to_json(stat);
  return j;
}

nlohmann::json to_json(const ComparisonReport& r) {
  nlohmann::json deltas = nlohmann::json::object();
  for (const auto& [name, d] : r.deltas) deltas[name] = d;
  return {{"deltas", deltas},
          {"percent_reduction", r.reduction * 100.0},
          {"reduction_fraction", r.reduction},
          {"threshold", r.threshold},
          {"significant", r.significant}};
}

}  // namespace mia::metrics
